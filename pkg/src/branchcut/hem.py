"""Minimal holomorphic-embedding power flow.

Classical embedding: injections and shunts are scaled by the embedding
parameter alpha, the slack is held at 1, and the alpha = 0 state is the
no-load flat start V = 1 at every bus. Per-bus voltage series V(alpha)
and reciprocal series W = 1/V extend order by order through one sparse
linear solve per order; [m/m+1] approximants of the V series evaluated at
the target alpha deliver the solution, and their smallest positive real
denominator pole estimates the saddle-node bifurcation point (SNBP).

PQ and slack buses only; per-unit throughout.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import gmpy2

from . import _kernels
from .analysis import ConvergenceReport, Plane, _fit_loglinear, froissart_filter, portrait
from .errors import (
    DegeneracyError,
    DegenerateNetworkError,
    InputError,
    NearPoleError,
    NonConvergenceError,
    SingularOperandError,
)
from .kernel import BigComplex, PrecisionContext
from .pade import build, evaluate
from .series import ExpansionPoint, PowerSeries


class BusKind(enum.Enum):
    SLACK = "slack"
    PQ = "pq"


@dataclass(frozen=True)
class Bus:
    id: str
    kind: BusKind
    s: BigComplex
    y_shunt: BigComplex


@dataclass(frozen=True)
class Branch:
    frm: str
    to: str
    y_series: BigComplex


@dataclass(frozen=True)
class Network:
    """Bus/branch model; exactly one slack, connected, unique ids."""

    buses: Tuple[Bus, ...]
    branches: Tuple[Branch, ...]
    ctx: PrecisionContext

    def __post_init__(self):
        ids = [b.id for b in self.buses]
        if len(set(ids)) != len(ids):
            raise InputError("duplicate bus ids")
        if not ids:
            raise InputError("network has no buses")
        slacks = [b for b in self.buses if b.kind is BusKind.SLACK]
        if len(slacks) != 1:
            raise InputError(f"network needs exactly one slack bus, found {len(slacks)}")
        known = set(ids)
        adj: Dict[str, set] = {i: set() for i in ids}
        for br in self.branches:
            if br.frm not in known or br.to not in known:
                raise InputError(f"branch {br.frm}-{br.to} references an unknown bus")
            if br.frm == br.to:
                raise InputError(f"branch endpoints must differ (bus {br.frm})")
            if br.y_series.v == 0:
                raise InputError(f"branch {br.frm}-{br.to} has zero series admittance")
            adj[br.frm].add(br.to)
            adj[br.to].add(br.frm)
        seen = {ids[0]}
        stack = [ids[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if seen != known:
            raise InputError("network graph is not connected")

    @property
    def slack_index(self) -> int:
        return next(i for i, b in enumerate(self.buses) if b.kind is BusKind.SLACK)

    def admittance(self) -> List[List["gmpy2.mpc"]]:
        """Branch-only nodal matrix (shunts live on the embedding side)."""
        n = len(self.buses)
        idx = {b.id: i for i, b in enumerate(self.buses)}
        with self.ctx.activate():
            y = [[gmpy2.mpc(0) for _ in range(n)] for _ in range(n)]
            for br in self.branches:
                i, j = idx[br.frm], idx[br.to]
                y[i][i] += br.y_series.v
                y[j][j] += br.y_series.v
                y[i][j] -= br.y_series.v
                y[j][i] -= br.y_series.v
            return y


@dataclass(frozen=True)
class VoltageSeries:
    """Per-bus arrays V[0..N] and W[0..N] with W = 1/V as formal series."""

    v: Tuple[Tuple[BigComplex, ...], ...]
    w: Tuple[Tuple[BigComplex, ...], ...]
    embedding: str
    ctx: PrecisionContext

    @property
    def order(self) -> int:
        return len(self.v[0]) - 1

    def bus_series(self, i: int) -> PowerSeries:
        return PowerSeries(ExpansionPoint.ZERO, self.v[i], self.ctx)


def build_germ(net: Network, ctx: Optional[PrecisionContext] = None) -> VoltageSeries:
    """Flat no-load germ: V[0] = W[0] = 1 at every bus."""
    ctx = ctx or net.ctx
    one = (ctx.big(1),)
    n = len(net.buses)
    return VoltageSeries(tuple(one for _ in range(n)), tuple(one for _ in range(n)), "classical", ctx)


def extend(net: Network, vs: VoltageSeries, n: int) -> VoltageSeries:
    """Append order-n coefficients (vs must hold orders 0..n-1).

    PQ row i of the transfer system: sum_k Y_ik V_k[n] =
    conj(S_i) conj(W_i[n-1]) - y_shunt_i V_i[n-1]; the slack row pins
    V_slack[n] = 0. W[n] then follows from the convolution identity.
    """
    if n != vs.order + 1:
        raise ValueError(f"series holds orders 0..{vs.order}; cannot jump to order {n}")
    ctx = vs.ctx
    nbus = len(net.buses)
    with ctx.activate():
        y = net.admittance()
        rows = []
        rhs = []
        for i, bus in enumerate(net.buses):
            if bus.kind is BusKind.SLACK:
                rows.append([gmpy2.mpc(1 if j == i else 0) for j in range(nbus)])
                rhs.append(gmpy2.mpc(0))
            else:
                rows.append(y[i])
                w_prev = vs.w[i][n - 1].v
                v_prev = vs.v[i][n - 1].v
                srhs = bus.s.conj().v * gmpy2.mpc(w_prev.real, -w_prev.imag)
                rows_rhs = srhs - bus.y_shunt.v * v_prev
                rhs.append(rows_rhs)
        scale = max(
            (abs(e) for row in rows for e in row), default=gmpy2.mpfr(1)
        )
        x, rank, consistent = _kernels.gauss_solve(rows, rhs, scale * gmpy2.exp2(-(3 * ctx.bits) // 4))
        if x is None or rank < nbus:
            raise DegenerateNetworkError("singular transfer matrix")
        for i, bus in enumerate(net.buses):
            # pinned exactly: elimination leaves 1-ulp residue here, and the
            # Pade table of [1, noise...] is degenerate at every order
            if bus.kind is BusKind.SLACK:
                x[i] = gmpy2.mpc(0)
        new_v = []
        new_w = []
        for i in range(nbus):
            vi = [c.v for c in vs.v[i]] + [x[i]]
            wi = [c.v for c in vs.w[i]]
            wn = -_kernels.conv_slice(wi, vi, n)
            wi.append(wn)
            new_v.append(tuple(BigComplex(c, ctx.bits) for c in vi))
            new_w.append(tuple(BigComplex(c, ctx.bits) for c in wi))
    return VoltageSeries(tuple(new_v), tuple(new_w), vs.embedding, ctx)


def extend_to(net: Network, vs: VoltageSeries, order: int) -> VoltageSeries:
    while vs.order < order:
        vs = extend(net, vs, vs.order + 1)
    return vs


def mismatch(net: Network, volts: Sequence[BigComplex], alpha) -> "gmpy2.mpfr":
    """Max PQ-bus residual |conj(V_i)(sum_k Y_ik V_k + alpha y_sh_i V_i) - alpha conj(S_i)|."""
    if len(volts) != len(net.buses):
        raise ValueError("one voltage per bus required")
    ctx = net.ctx
    with ctx.activate():
        alpha = gmpy2.mpfr(alpha)
        for v in volts:
            if v.v == 0:
                raise SingularOperandError("zero voltage in mismatch evaluation")
        y = net.admittance()
        worst = gmpy2.mpfr(0)
        for i, bus in enumerate(net.buses):
            if bus.kind is not BusKind.PQ:
                continue
            inj = gmpy2.mpc(0)
            for k in range(len(net.buses)):
                inj += y[i][k] * volts[k].v
            inj += alpha * bus.y_shunt.v * volts[i].v
            vi = volts[i].v
            res = gmpy2.mpc(vi.real, -vi.imag) * inj - alpha * bus.s.conj().v
            worst = max(worst, abs(res))
        return worst


@dataclass(frozen=True)
class HemSolution:
    converged: bool
    voltages: Tuple[BigComplex, ...]
    mismatch: "gmpy2.mpfr"
    report: ConvergenceReport


def solve(net: Network, alpha_target: float, max_m: int = 30, tol=1e-10) -> HemSolution:
    """Evaluate [m/m+1] approximants at alpha_target for growing m.

    Converged when successive evaluations agree under tol AND the power
    mismatch is under tol. Nonconvergence is a verdict on the returned
    solution, never an exception.
    """
    if not alpha_target > 0:
        raise ValueError("alpha_target must be positive")
    ctx = net.ctx
    vs = build_germ(net)
    degrees: List[int] = []
    diffs: List["gmpy2.mpfr"] = []
    prev_vals: Optional[List[BigComplex]] = None
    best = tuple(ctx.big(1) for _ in net.buses)
    best_mm = mismatch(net, best, alpha_target)
    with ctx.activate():
        tol = gmpy2.mpfr(tol)
        alpha_b = ctx.big(alpha_target)
    for m in range(1, max_m + 1):
        vs = extend_to(net, vs, 2 * m + 2)
        try:
            vals = [
                evaluate(build(vs.bus_series(i), m, m + 1), alpha_b)
                for i in range(len(net.buses))
            ]
        except (DegeneracyError, NearPoleError):
            continue
        if any(v.v == 0 for v in vals):
            continue
        mm = mismatch(net, vals, alpha_target)
        if prev_vals is not None:
            with ctx.activate():
                d = max(abs(a.v - b.v) for a, b in zip(vals, prev_vals))
            degrees.append(m)
            diffs.append(d)
            if d < tol and mm < tol:
                report = _trace_report(ctx, alpha_b, degrees, diffs)
                return HemSolution(True, tuple(vals), mm, report)
        prev_vals = vals
        best, best_mm = tuple(vals), mm
    report = _trace_report(ctx, alpha_b, degrees, diffs)
    return HemSolution(False, best, best_mm, report)


def _trace_report(ctx, alpha_b, degrees, diffs) -> ConvergenceReport:
    with ctx.activate():
        floor = gmpy2.exp2(-ctx.bits + 32)
        positive = [(m, d) for m, d in zip(degrees, diffs) if d > floor]
        if len(positive) >= 3:
            s = _fit_loglinear(
                [gmpy2.mpfr(m) for m, _ in positive], [gmpy2.log(d) for _, d in positive]
            )
            g_est = gmpy2.exp(s / 2)
            g_step = gmpy2.exp(s)
        else:
            g_est = gmpy2.mpfr(0)
            g_step = gmpy2.mpfr(0)
    return ConvergenceReport(alpha_b, tuple(degrees), tuple(diffs), g_est, g_step, None)


@dataclass(frozen=True)
class SnbpEstimate:
    detected: bool
    alpha: Optional[float]
    spread: Optional[float]
    per_m: Dict[int, Optional[float]]


def snbp_estimate(net: Network, max_m: int = 30, horizon: Optional[float] = None) -> SnbpEstimate:
    """Smallest positive real PA pole of any bus series, Froissart-filtered.

    Requires agreement (spread < 5%) across the last three m values;
    disagreement raises NonConvergenceError. No candidate pole below the
    horizon at any of the three m values is the structured no-SNBP verdict.
    """
    if max_m < 10:
        raise ValueError("max_m must be >= 10")
    ctx = net.ctx
    vs = extend_to(net, build_germ(net), 2 * max_m + 2)
    ms = [max_m - 2, max_m - 1, max_m]
    per_m: Dict[int, Optional[float]] = {}
    hz = float("inf") if horizon is None else float(horizon)
    for m in ms:
        cands: List[float] = []
        for i, bus in enumerate(net.buses):
            if bus.kind is not BusKind.PQ:
                continue
            try:
                pa = build(vs.bus_series(i), m, m + 1)
            except DegeneracyError:
                continue
            clean, _ = froissart_filter(portrait(pa, Plane.ALPHA), pair_tol=1e-3)
            with ctx.activate():
                for pole in clean.poles:
                    re, im = pole.re, abs(pole.im)
                    if re > 0 and im < gmpy2.mpfr("1e-3") * max(gmpy2.mpfr(1), re) and re < hz:
                        cands.append(float(re))
        per_m[m] = min(cands) if cands else None
    found = [a for a in per_m.values() if a is not None]
    if not found:
        return SnbpEstimate(False, None, None, per_m)
    if len(found) < len(ms):
        raise NonConvergenceError("SNBP candidates appear only intermittently", diagnostic=per_m)
    lo, hi = min(found), max(found)
    spread = (hi - lo) / ((hi + lo) / 2)
    if spread >= 0.05:
        raise NonConvergenceError(
            f"SNBP estimate not stabilized: spread {spread:.3f} across m={ms}", diagnostic=per_m
        )
    return SnbpEstimate(True, per_m[max_m], spread, per_m)


def _parse_cnum(value, ctx: PrecisionContext, where: str) -> BigComplex:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise InputError(f"{where}: expected [re, im], got {value!r}")
    parts = []
    for p in value:
        if isinstance(p, bool) or not isinstance(p, (int, float, str)):
            raise InputError(f"{where}: numbers or decimal strings expected, got {p!r}")
        try:
            parts.append(ctx.real(p))
        except ValueError:
            raise InputError(f"{where}: cannot parse {p!r} as a decimal") from None
    return ctx.big(parts[0], parts[1])


def network_from_dict(data, ctx: PrecisionContext) -> Network:
    if not isinstance(data, dict):
        raise InputError("network must be a JSON object")
    unknown = set(data) - {"buses", "branches"}
    if unknown:
        raise InputError(f"unknown network keys: {sorted(unknown)}")
    if not isinstance(data.get("buses"), list) or not isinstance(data.get("branches"), list):
        raise InputError("network needs 'buses' and 'branches' lists")
    buses = []
    for k, bd in enumerate(data["buses"]):
        if not isinstance(bd, dict):
            raise InputError(f"buses[{k}] must be an object")
        unknown = set(bd) - {"id", "kind", "s", "y_shunt"}
        if unknown:
            raise InputError(f"buses[{k}]: unknown keys {sorted(unknown)}")
        if "id" not in bd or "kind" not in bd:
            raise InputError(f"buses[{k}]: 'id' and 'kind' are required")
        if bd["kind"] not in ("slack", "pq"):
            raise InputError(f"buses[{k}]: kind must be 'slack' or 'pq', got {bd['kind']!r}")
        buses.append(
            Bus(
                str(bd["id"]),
                BusKind(bd["kind"]),
                _parse_cnum(bd.get("s", [0, 0]), ctx, f"buses[{k}].s"),
                _parse_cnum(bd.get("y_shunt", [0, 0]), ctx, f"buses[{k}].y_shunt"),
            )
        )
    branches = []
    for k, rd in enumerate(data["branches"]):
        if not isinstance(rd, dict):
            raise InputError(f"branches[{k}] must be an object")
        unknown = set(rd) - {"from", "to", "y_series"}
        if unknown:
            raise InputError(f"branches[{k}]: unknown keys {sorted(unknown)}")
        for key in ("from", "to", "y_series"):
            if key not in rd:
                raise InputError(f"branches[{k}]: {key!r} is required")
        branches.append(
            Branch(str(rd["from"]), str(rd["to"]), _parse_cnum(rd["y_series"], ctx, f"branches[{k}].y_series"))
        )
    return Network(tuple(buses), tuple(branches), ctx)


def load_network(path, ctx: PrecisionContext) -> Network:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InputError(f"cannot read network file {path}: {e}") from None
    return network_from_dict(data, ctx)
