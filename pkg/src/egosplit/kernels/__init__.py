"""Hot-loop kernels with two interchangeable backends.

The numerically heavy inner loops (ego-net clustering, walk generation,
hierarchical-softmax SGD, connectivity-preserving edge removal, pairwise
neighborhood scoring) are implemented twice with identical semantics:

* ``numba_impl`` -- ``@njit``-compiled kernels, the default when numba is
  importable.  Required for large graphs.
* ``numpy_impl`` -- pure numpy/Python fallback, used when numba is missing
  or explicitly requested.  Fine for small graphs and for cross-checking.

Backend selection, in precedence order:

1. :func:`set_backend` (runtime override, used by tests and benchmarks),
2. the ``EGOSPLIT_BACKEND`` environment variable (``numba`` or ``numpy``),
3. default: ``numba`` when importable, else ``numpy``.
"""

from __future__ import annotations

import importlib
import os

_BACKEND_NAMES = ("numba", "numpy")

try:
    importlib.import_module("numba")
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    _HAVE_NUMBA = False


def _default_backend() -> str:
    env = os.environ.get("EGOSPLIT_BACKEND", "").strip().lower()
    if env:
        if env not in _BACKEND_NAMES:
            raise ValueError(
                f"EGOSPLIT_BACKEND={env!r}; expected one of {_BACKEND_NAMES}"
            )
        if env == "numba" and not _HAVE_NUMBA:
            raise ImportError("EGOSPLIT_BACKEND=numba but numba is not installed")
        return env
    return "numba" if _HAVE_NUMBA else "numpy"


_active = _default_backend()
_modules: dict[str, object] = {}


def get_backend() -> str:
    """Name of the backend currently serving kernel calls."""
    return _active


def set_backend(name: str) -> None:
    """Switch kernel backend at runtime (``"numba"`` or ``"numpy"``)."""
    global _active
    if name not in _BACKEND_NAMES:
        raise ValueError(f"unknown backend {name!r}; expected one of {_BACKEND_NAMES}")
    if name == "numba" and not _HAVE_NUMBA:
        raise ImportError("numba backend requested but numba is not installed")
    _active = name


def numba_available() -> bool:
    return _HAVE_NUMBA


def set_thread_count(n: int) -> int:
    """Clamp and apply the numba thread count; no-op on the numpy backend."""
    if not _HAVE_NUMBA:
        return 1
    import numba

    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
    return n


def _impl():
    mod = _modules.get(_active)
    if mod is None:
        mod = importlib.import_module(f"egosplit.kernels.{_active}_impl")
        _modules[_active] = mod
    return mod


# Dispatched kernels.  Signatures and semantics are documented once, in
# numpy_impl (the readable reference); numba_impl mirrors it loop for loop.

def fill_walks(indptr, indices, starts, steps, out):
    return _impl().fill_walks(indptr, indices, starts, steps, out)


def ego_personas(indptr, indices):
    return _impl().ego_personas(indptr, indices)


def persona_edge_endpoints(indptr, indices, arc_persona):
    return _impl().persona_edge_endpoints(indptr, indices, arc_persona)


def train_pass(walks, lengths, window, vec, t_nodes, t_codes, t_off, t_syn,
               alpha0, alpha_min, pos_offset, total_positions,
               lam, p2n, r_nodes, r_codes, r_off, r_syn, track_loss):
    return _impl().train_pass(
        walks, lengths, window, vec, t_nodes, t_codes, t_off, t_syn,
        alpha0, alpha_min, pos_offset, total_positions,
        lam, p2n, r_nodes, r_codes, r_off, r_syn, track_loss)


def train_pass_parallel(walks, lengths, window, vec, t_nodes, t_codes, t_off,
                        t_syn, alpha0, alpha_min, pos_offset, total_positions,
                        lam, p2n, r_nodes, r_codes, r_off, r_syn):
    """Hogwild-style variant; numba backend only (no-GIL threads)."""
    if _active != "numba":
        raise RuntimeError("parallel training requires the numba backend")
    return _impl().train_pass_parallel(
        walks, lengths, window, vec, t_nodes, t_codes, t_off, t_syn,
        alpha0, alpha_min, pos_offset, total_positions,
        lam, p2n, r_nodes, r_codes, r_off, r_syn)


def split_filter(num_nodes, arc_indptr, arc_targets, arc_edge,
                 edge_u, edge_v, order, target):
    return _impl().split_filter(
        num_nodes, arc_indptr, arc_targets, arc_edge,
        edge_u, edge_v, order, target)


def score_neighborhood_pairs(indptr, indices, us, vs, kind):
    return _impl().score_neighborhood_pairs(indptr, indices, us, vs, kind)
