"""Explicit (n_sv + 2)-state Markov chain and its numerical steady state.

State order is fixed: ``0`` is the network up state, ``1..n_sv`` count the
failed cycles of a burst still inside the survival window, and the last
index is the application down state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from survmap.core import NetworkParams, _check_nsv
from survmap.errors import InvalidInputError, NumericalError

# Above this size the chain is kept sparse; a dense 10^4 x 10^4 matrix is 800 MB.
DENSE_LIMIT = 512

RESIDUAL_TOL = 1e-12


def state_labels(n_sv: int) -> list[str]:
    return ["U_N", *(str(i) for i in range(1, n_sv + 1)), "D"]


@dataclass(frozen=True, eq=False)
class FsmcModel:
    n_sv: int
    params: NetworkParams
    transition_matrix: sp.csr_array

    @property
    def size(self) -> int:
        return self.n_sv + 2

    def dense(self) -> np.ndarray:
        return self.transition_matrix.toarray()


@dataclass(frozen=True, eq=False)
class SteadyState:
    pi: np.ndarray

    @property
    def up(self) -> float:
        return float(self.pi[0])

    @property
    def down(self) -> float:
        return float(self.pi[-1])


def build_chain(params: NetworkParams, n_sv: int) -> FsmcModel:
    if not isinstance(params, NetworkParams):
        raise InvalidInputError("params must be NetworkParams")
    _check_nsv(n_sv)
    n = n_sv + 2
    down = n - 1
    r_u, r_d = params.r_u, params.r_d
    rows: list[int] = [0, 0]
    cols: list[int] = [0, 1]
    vals: list[float] = [1.0 - r_u, r_u]
    # failure-depth states 1..n_sv and D all return to U_N with r_d
    rows += list(range(1, n))
    cols += [0] * (n - 1)
    vals += [r_d] * (n - 1)
    # advance one level deeper; D loops on itself
    rows += list(range(1, n))
    cols += [min(i + 1, down) for i in range(1, n)]
    vals += [1.0 - r_d] * (n - 1)
    m = sp.coo_array((vals, (rows, cols)), shape=(n, n)).tocsr()
    m.sum_duplicates()
    m.eliminate_zeros()
    m.data.setflags(write=False)
    return FsmcModel(n_sv=n_sv, params=params, transition_matrix=m)


def steady_state(model: FsmcModel) -> SteadyState:
    """Solve ``pi M = pi`` with the last balance equation replaced by ``sum(pi) = 1``."""
    n = model.size
    m = model.transition_matrix
    if n <= DENSE_LIMIT:
        a = m.toarray().T - np.eye(n)
        a[-1, :] = 1.0
        b = np.zeros(n)
        b[-1] = 1.0
        try:
            pi = np.linalg.solve(a, b)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"steady-state system is singular: {exc}") from exc
    else:
        a = (m.T - sp.eye_array(n, format="csr")).tolil()
        a[-1, :] = np.ones(n)
        b = np.zeros(n)
        b[-1] = 1.0
        pi = spsolve(a.tocsc(), b)
    if not np.all(np.isfinite(pi)):
        raise NumericalError("steady-state solve produced non-finite values")
    # round-off can leave -1e-18 on states with zero mass
    pi = np.where((pi < 0) & (pi > -RESIDUAL_TOL), 0.0, pi)
    residual = np.max(np.abs(m.T @ pi - pi))
    if residual > RESIDUAL_TOL or np.any(pi < 0) or abs(pi.sum() - 1.0) > RESIDUAL_TOL:
        raise NumericalError(f"steady-state residual {residual:.3e} exceeds tolerance")
    pi.setflags(write=False)
    return SteadyState(pi)


def power_iterate(model: FsmcModel, pi0: np.ndarray, k: int) -> np.ndarray:
    """Apply ``pi <- pi M`` ``k`` times."""
    mt = model.transition_matrix.T.tocsr()
    pi = np.asarray(pi0, dtype=float).copy()
    for _ in range(k):
        pi = mt @ pi
    return pi


def write_csv(model: FsmcModel, state: SteadyState | None, fh) -> None:
    """Row-major dump of M (and pi as a final row) with state labels."""
    labels = state_labels(model.n_sv)
    fh.write("state," + ",".join(labels) + "\n")
    dense = model.dense()
    for label, row in zip(labels, dense):
        fh.write(label + "," + ",".join(repr(float(v)) for v in row) + "\n")
    if state is not None:
        fh.write("pi," + ",".join(repr(float(v)) for v in state.pi) + "\n")
