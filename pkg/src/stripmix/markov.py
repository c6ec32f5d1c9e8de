"""The symmetric chain M_{m,n} and the lazy simple chain N^p_{m,n}.

Transition matrices are exact (``Fraction`` entries, sparse rows); spectra
and long TV curves use floating point.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ConvergenceFailure, DomainError, HeavySide, IsolatedVertex, TooLarge
from .kernel import (
    CornerSwitch,
    EndFlip,
    KernelGraph,
    VertexClass,
    apply_move,
    is_valid_path,
)

DENSE_LIMIT = 5000
EXACT_PHI_CAP = 22
ALL_STARTS_LIMIT = 500


@dataclass(frozen=True)
class ChainSpec:
    kind: str  # "symmetric" or "lazy"
    p: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("symmetric", "lazy"):
            raise DomainError(f"unknown chain kind {self.kind!r}")
        if self.kind == "lazy":
            p = Fraction(self.p) if self.p is not None else None
            if p is None or not 0 < p < 1:
                raise DomainError("lazy chain needs 0 < p < 1")
            object.__setattr__(self, "p", p)

    @classmethod
    def symmetric(cls) -> ChainSpec:
        return cls("symmetric")

    @classmethod
    def lazy(cls, p) -> ChainSpec:
        return cls("lazy", Fraction(p))

    def label(self) -> str:
        return "symmetric" if self.kind == "symmetric" else f"lazy(p={self.p})"


@dataclass
class StochasticMatrix:
    rows: list[dict[int, Fraction]]

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, xy: tuple[int, int]) -> Fraction:
        x, y = xy
        return self.rows[x].get(y, Fraction(0))

    def row_sums(self) -> list[Fraction]:
        return [sum(r.values(), Fraction(0)) for r in self.rows]

    def is_symmetric(self) -> bool:
        return all(self[y, x] == p for x, r in enumerate(self.rows) for y, p in r.items())

    def left_multiply(self, mu: Sequence) -> list:
        """mu P, exact if mu is exact."""
        out = [0 * mu[0] for _ in range(self.size)]
        for x, r in enumerate(self.rows):
            w = mu[x]
            if w:
                for y, p in r.items():
                    out[y] += w * p
        return out

    def to_sparse(self) -> sp.csr_matrix:
        data, ri, ci = [], [], []
        for x, r in enumerate(self.rows):
            for y, p in r.items():
                ri.append(x)
                ci.append(y)
                data.append(float(p))
        return sp.csr_matrix((data, (ri, ci)), shape=(self.size, self.size))

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()


def build_chain(kernel: KernelGraph, spec: ChainSpec, _unit_p: bool = False) -> StochasticMatrix:
    """Exact transition matrix of the chosen chain on ``kernel``.

    ``_unit_p`` builds the non-lazy simple walk (p = 1); test use only.
    """
    if spec.kind == "symmetric":
        return _symmetric_rows(kernel)
    p = Fraction(1) if _unit_p else spec.p
    rows = []
    for x, adj in enumerate(kernel.adjacency):
        deg = len(adj)
        if deg == 0:
            raise IsolatedVertex(f"vertex {kernel.vertices[x]!r} has no moves")
        row: dict[int, Fraction] = {}
        if p != 1:
            row[x] = 1 - p
        for y, _ in adj:
            row[y] = row.get(y, Fraction(0)) + p / deg
        rows.append(row)
    return StochasticMatrix(rows)


def symmetric_choices(steps: str, m: int) -> list[tuple[Fraction, str]]:
    """Outcomes of one symmetric-chain step as (probability, path) pairs.

    Infeasible choices map back to ``steps``; duplicates are not merged.
    """
    n = len(steps)
    out = []
    for v in range(1, n):
        y = steps
        if steps[v - 1] != steps[v]:
            cand = apply_move(steps, CornerSwitch(v))
            if is_valid_path(cand, m):
                y = cand
        out.append((Fraction(1, n), y))
    if steps[-1] == "E":
        targets = ("N", "S")
    else:
        targets = ("E", None)  # flip to E or do nothing, each 1/2
    for t in targets:
        y = steps
        if t is not None:
            cand = apply_move(steps, EndFlip(t, n))
            if is_valid_path(cand, m):
                y = cand
        out.append((Fraction(1, 2 * n), y))
    return out


def _symmetric_rows(kernel: KernelGraph) -> StochasticMatrix:
    if kernel.n < 1:
        raise DomainError("symmetric chain needs n >= 1")
    rows = []
    for x, steps in enumerate(kernel.vertices):
        row: dict[int, Fraction] = {}
        for prob, y in symmetric_choices(steps, kernel.m):
            j = kernel.index(y)
            row[j] = row.get(j, Fraction(0)) + prob
        rows.append(row)
    return StochasticMatrix(rows)


# -- stationary distribution ----------------------------------------------------

def stationary(P: StochasticMatrix) -> list[Fraction]:
    """Exact stationary distribution.

    Propagates detailed balance along a BFS tree, then checks pi P = pi
    exactly; a non-reversible P falls back to exact elimination.
    """
    n = P.size
    w: list[Fraction | None] = [None] * n
    w[0] = Fraction(1)
    queue = deque([0])
    reversible = True
    while queue:
        x = queue.popleft()
        for y, pxy in P.rows[x].items():
            if y == x or not pxy:
                continue
            pyx = P[y, x]
            if not pyx:
                reversible = False
                continue
            val = w[x] * pxy / pyx
            if w[y] is None:
                w[y] = val
                queue.append(y)
            elif w[y] != val:
                reversible = False
    if not reversible:
        return _solve_stationary(P)
    if any(v is None for v in w):
        raise DomainError("chain is not irreducible")
    total = sum(w)
    pi = [v / total for v in w]
    if P.left_multiply(pi) != pi:  # pragma: no cover - reversible implies stationary
        pi = _solve_stationary(P)
    return pi


def _solve_stationary(P: StochasticMatrix) -> list[Fraction]:
    n = P.size
    if n > 400:
        raise TooLarge("exact stationary solve capped at 400 states")
    # rows: (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
    A = [[P[j, i] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    A[-1] = [Fraction(1)] * n
    b = [Fraction(0)] * (n - 1) + [Fraction(1)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise DomainError("chain is not irreducible (stationary law not unique)")
        A[c], A[piv] = A[piv], A[c]
        b[c], b[piv] = b[piv], b[c]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * ac for a, ac in zip(A[r], A[c])]
                b[r] -= f * b[c]
    return [b[i] / A[i][i] for i in range(n)]


def detailed_balance_holds(P: StochasticMatrix, pi: Sequence[Fraction]) -> bool:
    return all(pi[x] * p == pi[y] * P[y, x] for x, r in enumerate(P.rows) for y, p in r.items())


# -- spectrum -------------------------------------------------------------------

def _symmetrized(P: StochasticMatrix, pi: Sequence) -> tuple[sp.csr_matrix, np.ndarray]:
    s = np.sqrt(np.array([float(v) for v in pi]))
    D = sp.diags(s)
    Dinv = sp.diags(1 / s)
    S = (D @ P.to_sparse() @ Dinv).tocsr()
    S = (S + S.T) / 2  # exact symmetry up to rounding
    return S, s


def lambda_max(P: StochasticMatrix, pi: Sequence, method: str = "auto",
               tol: float = 1e-10, max_iter: int = 200_000) -> float:
    """Second largest eigenvalue modulus of a reversible chain."""
    S, s = _symmetrized(P, pi)
    if method == "auto":
        method = "dense" if P.size <= DENSE_LIMIT else "power"
    if method == "dense":
        ev = np.linalg.eigvalsh(S.toarray())
        # drop the single eigenvalue closest to 1 (the Perron value)
        k = int(np.argmin(np.abs(ev - 1.0)))
        rest = np.delete(ev, k)
        return float(np.max(np.abs(rest))) if rest.size else 0.0
    if method == "power":
        return _deflated_power(S, s, tol, max_iter)
    raise DomainError(f"unknown method {method!r}")


def _deflated_power(S: sp.csr_matrix, top: np.ndarray, tol: float, max_iter: int) -> float:
    """Power iteration for |lambda|_max of S restricted to top-perp.

    Iterates with S^2 so that a pair +-lambda cannot make it oscillate.
    """
    top = top / np.linalg.norm(top)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(S.shape[0])
    v -= top * (top @ v)
    v /= np.linalg.norm(v)
    mu = 0.0
    resid = math.inf
    for _ in range(max_iter):
        w = S @ (S @ v)
        w -= top * (top @ w)
        mu = float(v @ w)
        resid = float(np.linalg.norm(w - mu * v))
        nw = np.linalg.norm(w)
        if nw == 0:
            return 0.0
        v = w / nw
        if resid < tol:
            return math.sqrt(max(mu, 0.0))
    raise ConvergenceFailure("deflated power iteration hit its cap", resid)


# -- conductance ----------------------------------------------------------------

def conductance_upper_bound(P: StochasticMatrix, pi: Sequence[Fraction],
                            side: Iterable[int]) -> Fraction:
    """Q(S) / pi(S) for the given set S (the bottleneck ratio of S)."""
    S = set(side)
    mass = sum((pi[x] for x in S), Fraction(0))
    if mass == 0:
        raise DomainError("set has zero stationary mass")
    if mass > Fraction(1, 2):
        raise HeavySide(f"pi(S) = {mass} > 1/2")
    flow = Fraction(0)
    for x in S:
        for y, p in P.rows[x].items():
            if y not in S:
                flow += pi[x] * p
    return flow / mass


def conductance_exact(P: StochasticMatrix, pi: Sequence[Fraction],
                      cap: int = EXACT_PHI_CAP) -> tuple[Fraction, list[int]]:
    """Exact Phi by scanning every subset in Gray-code order.

    Returns the minimum and one minimising set.
    """
    n = P.size
    if n > cap:
        raise TooLarge(f"exact conductance is capped at {cap} states, got {n}")
    # integer weights: W[x][y] = D * pi(x) P(x,y), M[x] = D * pi(x)
    denoms = [v.denominator for v in pi]
    denoms += [(pi[x] * p).denominator for x, r in enumerate(P.rows) for p in r.values()]
    D = math.lcm(*denoms)
    mass = [int(v * D) for v in pi]
    W = [{y: int(pi[x] * p * D) for y, p in r.items() if y != x} for x, r in enumerate(P.rows)]
    Win = [dict() for _ in range(n)]
    for x in range(n):
        for y, w in W[x].items():
            Win[y][x] = w
    inset = [False] * n
    flow = 0
    tot = 0
    best_num, best_den, best_set = None, None, None
    gray = 0
    for i in range(1, 1 << n):
        v = (i & -i).bit_length() - 1
        gray ^= 1 << v
        if not inset[v]:
            # adding v: lose edges from S into v, gain edges from v out of S
            flow -= sum(w for x, w in Win[v].items() if inset[x])
            flow += sum(w for y, w in W[v].items() if not inset[y])
            inset[v] = True
            tot += mass[v]
        else:
            inset[v] = False
            flow -= sum(w for y, w in W[v].items() if not inset[y])
            flow += sum(w for x, w in Win[v].items() if inset[x])
            tot -= mass[v]
        if 2 * tot > D:
            continue
        if best_num is None or flow * best_den < best_num * tot:
            best_num, best_den, best_set = flow, tot, gray
    members = [x for x in range(n) if best_set >> x & 1]
    return Fraction(best_num, best_den), members


def mixing_lower_bounds(lam: float | None, phi: float | Fraction | None,
                        eps: float) -> tuple[float | None, float | None]:
    """(spectral bound, conductance bound) on tau(eps)."""
    if not 0 < eps < 0.5:
        raise DomainError("need 0 < eps < 1/2")
    log_term = math.log(1 / (2 * eps))
    t_spec = t_cond = None
    if lam is not None:
        if not 0 < lam < 1:
            raise DomainError("need 0 < lambda_max < 1")
        t_spec = lam / (1 - lam) * log_term
    if phi is not None:
        phi = float(phi)
        if not 0 < phi < 0.5:
            raise DomainError("need 0 < Phi < 1/2")
        t_cond = (1 - 2 * phi) / (2 * phi) * log_term
    return t_spec, t_cond


# -- total variation --------------------------------------------------------------

def tv_distance(mu: Sequence, nu: Sequence):
    return sum(abs(a - b) for a, b in zip(mu, nu)) / 2


def tv_evolution(P: StochasticMatrix, pi: Sequence, start: int, T: int,
                 exact: bool = False) -> list:
    """d_start(t) = ||P^t(start, .) - pi||_TV for t = 0..T."""
    if exact:
        mu = [Fraction(0)] * P.size
        mu[start] = Fraction(1)
        out = [tv_distance(mu, pi)]
        for _ in range(T):
            mu = P.left_multiply(mu)
            out.append(tv_distance(mu, pi))
        return out
    PT = P.to_sparse().T.tocsr()
    target = np.array([float(v) for v in pi])
    mu = np.zeros(P.size)
    mu[start] = 1.0
    out = [0.5 * float(np.abs(mu - target).sum())]
    for _ in range(T):
        mu = PT @ mu
        out.append(0.5 * float(np.abs(mu - target).sum()))
    return out


def default_start_set(kernel: KernelGraph) -> tuple[list[int], bool]:
    """Start states for d(t) and whether they cover all of Omega."""
    if len(kernel.vertices) <= ALL_STARTS_LIMIT:
        return list(range(len(kernel.vertices))), True
    starts = [kernel.root]
    if kernel.partition is not None:
        side_b = kernel.class_members(VertexClass.SIDE_B)
        # latest second (down) vertical step
        def second_vertical(u):
            steps = kernel.vertices[u]
            idx = [i for i, s in enumerate(steps) if s != "E"]
            return idx[1]
        starts.append(max(side_b, key=lambda u: (second_vertical(u), kernel.vertices[u])))
    return starts, False


def tv_max_curve(P: StochasticMatrix, pi: Sequence, starts: Sequence[int], T: int,
                 threads: int = 1) -> list[float]:
    """max over ``starts`` of d_start(t), float arithmetic."""
    def one(s):
        return tv_evolution(P, pi, s, T)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(threads) as ex:
            curves = list(ex.map(one, starts))
    else:
        curves = [one(s) for s in starts]
    return [max(c[t] for c in curves) for t in range(T + 1)]


# -- simulation -----------------------------------------------------------------

def _outcome_table(kernel: KernelGraph, spec: ChainSpec) -> list[list[int]]:
    """For the symmetric chain: the 2n equally likely outcomes per state."""
    table = []
    for steps in kernel.vertices:
        outs = []
        for prob, y in symmetric_choices(steps, kernel.m):
            reps = int(prob * 2 * kernel.n)
            outs.extend([kernel.index(y)] * reps)
        table.append(outs)
    return table


def one_step_samples(kernel: KernelGraph, spec: ChainSpec, start: int, count: int,
                     seed: int) -> np.ndarray:
    """``count`` independent one-step moves from ``start``."""
    rng = np.random.default_rng(seed)
    if spec.kind == "symmetric":
        outs = np.array(_outcome_table_row(kernel, start))
        return outs[rng.integers(0, len(outs), size=count)]
    nbrs = np.array([v for v, _ in kernel.adjacency[start]])
    if len(nbrs) == 0:
        raise IsolatedVertex("start has no moves")
    move = rng.random(count) < float(spec.p)
    pick = nbrs[rng.integers(0, len(nbrs), size=count)]
    return np.where(move, pick, start)


def _outcome_table_row(kernel: KernelGraph, x: int) -> list[int]:
    outs = []
    for prob, y in symmetric_choices(kernel.vertices[x], kernel.m):
        outs.extend([kernel.index(y)] * int(prob * 2 * kernel.n))
    return outs


def simulate(kernel: KernelGraph, spec: ChainSpec, start: int, steps: int,
             seed: int) -> list[int]:
    """One trajectory of vertex indices, including the start state."""
    rng = np.random.default_rng(seed)
    traj = [start]
    if steps == 0:
        return traj
    x = start
    if spec.kind == "symmetric":
        table = _outcome_table(kernel, spec)
        width = 2 * kernel.n
        draws = rng.integers(0, width, size=steps)
        for c in draws.tolist():
            x = table[x][c]
            traj.append(x)
        return traj
    nbrs = kernel.neighbors()
    if any(not a for a in nbrs):
        raise IsolatedVertex("lazy chain needs every vertex to have a move")
    p = float(spec.p)
    u = rng.random(steps).tolist()
    pick = rng.random(steps).tolist()
    for a, b in zip(u, pick):
        if a < p:
            row = nbrs[x]
            x = row[int(b * len(row))]
        traj.append(x)
    return traj


def simulate_many(kernel: KernelGraph, spec: ChainSpec, starts: Sequence[int], steps: int,
                  seed: int, threads: int = 1) -> list[list[int]]:
    """Independent trajectories; trajectory i uses the stream (seed, i)."""
    seeds = [np.random.SeedSequence([seed, i]) for i in range(len(starts))]

    def run(i):
        sub = int(seeds[i].generate_state(1, dtype=np.uint64)[0])
        return simulate(kernel, spec, starts[i], steps, sub)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(run, range(len(starts))))
    return [run(i) for i in range(len(starts))]


# -- report ---------------------------------------------------------------------

@dataclass
class MixReport:
    m: int
    n: int
    chain: str
    states: int
    eps: float
    lambda_max: float
    phi_upper: Fraction
    phi_exact: Fraction | None
    tv_curve: list[tuple[int, float]]
    tv_curve_is_exact_max: bool
    tau_lb_spectral: float | None
    tau_lb_conductance: float | None
    tau_lb_conductance_exact_phi: float | None = None
    separator: int | None = None
    side_a: int | None = None
    side_b: int | None = None
    tau_observed: int | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d["phi_upper"] = _frac_json(self.phi_upper)
        d["phi_exact"] = None if self.phi_exact is None else _frac_json(self.phi_exact)
        d["tv_curve"] = [[t, v] for t, v in self.tv_curve]
        return d

    def curve_csv(self, meta: str = "") -> str:
        buf = io.StringIO()
        if meta:
            buf.write(f"# {meta}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "d"])
        for t, v in self.tv_curve:
            w.writerow([t, repr(float(v))])
        return buf.getvalue()


def _frac_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator, "value": float(q)}


def mix_report(kernel: KernelGraph, spec: ChainSpec, eps: float = 0.125, tmax: int = 200,
               exact_phi: bool = False, threads: int = 1) -> MixReport:
    if kernel.partition is None:
        raise DomainError("mixing report needs m >= 2 and n >= 3")
    P = build_chain(kernel, spec)
    pi = stationary(P)
    side_b = kernel.class_members(VertexClass.SIDE_B)
    phi_ub = conductance_upper_bound(P, pi, side_b)
    phi_ex = None
    if exact_phi:
        phi_ex, _ = conductance_exact(P, pi)
    lam = lambda_max(P, pi)
    # the conductance bound needs 0 < Phi < 1/2; on tiny strips SideB can
    # leak half its mass in one step and the bound is vacuous
    usable = phi_ub if 0 < phi_ub < Fraction(1, 2) else None
    t_spec, t_cond = mixing_lower_bounds(lam if 0 < lam < 1 else None, usable, eps)
    t_cond_ex = None
    if phi_ex is not None and 0 < phi_ex < Fraction(1, 2):
        _, t_cond_ex = mixing_lower_bounds(None, phi_ex, eps)
    starts, exact_max = default_start_set(kernel)
    curve = tv_max_curve(P, pi, starts, tmax, threads)
    observed = next((t for t, d in enumerate(curve) if d <= eps), None)
    return MixReport(
        m=kernel.m, n=kernel.n, chain=spec.label(), states=P.size, eps=eps,
        lambda_max=lam, phi_upper=phi_ub, phi_exact=phi_ex,
        tv_curve=list(enumerate(curve)), tv_curve_is_exact_max=exact_max,
        tau_lb_spectral=t_spec, tau_lb_conductance=t_cond,
        tau_lb_conductance_exact_phi=t_cond_ex,
        separator=len(kernel.class_members(VertexClass.SEPARATOR)),
        side_a=len(kernel.class_members(VertexClass.SIDE_A)),
        side_b=len(side_b), tau_observed=observed if exact_max else None,
    )


def report_json(report: MixReport) -> str:
    return json.dumps(report.to_json(), indent=1, sort_keys=True)
