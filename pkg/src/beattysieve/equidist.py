"""Equidistribution error functionals and their scaling harnesses.

The central object is

    E(N, N', gamma, q, a) = sup_I | sum Lambda(n) - (N' - N) |I| / phi(q) |

with n running over [N, N'), n = a mod q, frac(gamma n) in I, and I over
torus arcs of length < 1.  The objective is piecewise linear in the arc
endpoints, so the supremum is determined by endpoint pairs at the data
points frac(gamma n); the sweep below evaluates every candidate exactly
in rational arithmetic (von Mangoldt masses are frozen to the rationals
of their float values, so both this sweep and any independent oracle see
identical numbers).

With the half-open arc convention (z, z + l] and a positive main term the
extremes are approached, not attained: shrinking l toward the minimal
span of a point run (or growing l toward a gap span) improves the value
until the content jumps.  Rows therefore carry the limiting interval and
an attained flag that is False in those cases.

The harnesses evaluate the two distribution-theorem left-hand sides and
the two regularity sums on concrete windows.  Their upper bounds are
asymptotic; nothing here asserts them.  Each harness emits deterministic
normalized columns so that trends across N can be recorded.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.integrate

from . import arith, beatty, dioph
from .errors import PreconditionError

HARNESS_POINT_BUDGET = 5 * 10**7


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(float(x))


@dataclass(frozen=True)
class ErrorRow:
    """One progression's supremal arc error.

    interval is the limiting arc when its limit length lies strictly
    inside (0, 1); it is None for the degenerate limits (a single point
    with length -> 0, or the whole circle with length -> 1).  attained
    records whether some proper arc achieves e exactly; under half-open
    arcs with a positive main term the value is only approached.
    """
    q: int
    a: int
    e: Fraction
    contributing_count: int
    interval: beatty.TorusInterval | None
    attained: bool


@dataclass(frozen=True)
class HarnessConfig:
    """Knobs shared by the distribution harnesses.

    q_cap / r_cap override the theorem-shaped modulus policies when set.
    n2_factor fixes N' = n2_factor * N and must lie in (1, 2].
    """
    gamma: object
    n_grid: tuple
    eps: float = 0.05
    a_power: float = 2.0
    n2_factor: float = 2.0
    q_cap: int | None = None
    r_cap: int | None = None
    k: int = 2
    theta: float = 0.25
    s: int = 1
    a_count: int = 1
    params: object = None
    y_value: object = None
    y_gm: dict | None = None
    b_gm: dict | None = None

    def __post_init__(self):
        if not self.n_grid:
            raise PreconditionError("empty N grid")
        if not 1 < self.n2_factor <= 2:
            raise PreconditionError("window factor must lie in (1, 2]",
                                    n2_factor=self.n2_factor)
        if self.a_count > self.s:
            raise PreconditionError("positive part cannot exceed s",
                                    a_count=self.a_count, s=self.s)

    def window(self, n: int) -> tuple:
        return n, min(2 * n, int(n * self.n2_factor))


def lambda_points(n_lo: int, n_hi: int, table=None):
    """(n, Lambda(n)) for prime powers in [n_lo, n_hi); masses are exact
    rational snapshots of log p."""
    root = math.isqrt(n_hi - 1)
    if table is not None and table.limit >= n_hi - 1:
        arr = table.primes()
        lo, hi = np.searchsorted(arr, (n_lo, n_hi))
        window = [int(p) for p in arr[lo:hi]]
        small = [int(p) for p in arr[:np.searchsorted(arr, root, side="right")]]
    else:
        sieved = arith.primes_upto(n_hi - 1)
        window = [p for p in sieved if p >= n_lo]
        small = [p for p in sieved if p <= root]
    out = [(p, Fraction(math.log(p))) for p in window]
    for p in small:
        mass = Fraction(math.log(p))
        power = p * p
        while power < n_hi:
            if power >= n_lo:
                out.append((power, mass))
            power *= p
    out.sort()
    return out


def _sliding_max(values, window: int):
    """For each start i, (best j, max) of values[j] over j in [i, i+window)."""
    from collections import deque
    n = len(values)
    best = [None] * (n - window + 1) if window <= n else []
    dq = deque()
    for j in range(n):
        while dq and values[dq[-1]] <= values[j]:
            dq.pop()
        dq.append(j)
        i = j - window + 1
        if i >= 0:
            while dq[0] < i:
                dq.popleft()
            best[i] = dq[0]
    return best


def _window_points(n_lo: int, n_hi: int, gamma, table=None) -> list[tuple]:
    g = _to_fraction(gamma)
    return [(m, (g * m) % 1, lam) for m, lam in lambda_points(n_lo, n_hi, table)]


def _row_from_pairs(pairs, c: Fraction, q: int, a: int) -> ErrorRow:
    """Run the endpoint sweep on (position, mass) pairs for one progression.

    Candidates: point runs with infimal covering length (mass-heavy arcs)
    and point gaps with supremal empty length (length-heavy arcs),
    including the wrap-around and the |I| -> 1 limits.
    """
    masses = {}
    for pos, lam in pairs:
        masses[pos] = masses.get(pos, Fraction(0)) + lam
    if not masses:
        return ErrorRow(q, a, c, 0, None, False)

    xs = sorted(masses)
    ws = [masses[x] for x in xs]
    m_count = len(xs)
    x2 = xs + [x + 1 for x in xs]
    prefix = [Fraction(0)]
    for w in ws + ws:
        prefix.append(prefix[-1] + w)

    # mass-heavy: runs i..j, value mass(i..j) - c (x_j - x_i)
    g_vals = [prefix[j + 1] - c * x2[j] for j in range(2 * m_count)]
    best_g = _sliding_max(g_vals, m_count)
    best = None
    for i in range(m_count):
        j = best_g[i]
        val = g_vals[j] - (prefix[i] - c * x2[i])
        if best is None or val > best[0]:
            best = (val, "run", i, j)

    # length-heavy: spans i..j excluding both ends, value
    # c (x_j - x_i) - mass strictly inside; j = i + m is the |I| -> 1 limit
    u_vals = [c * x2[j] - prefix[j] for j in range(2 * m_count)]
    best_u = _sliding_max(u_vals[1:] + [u_vals[0]], m_count)
    for i in range(m_count):
        # window j in [i+1, i+m]: shifted array index i covers it
        j = best_u[i] + 1
        val = u_vals[j] - (c * x2[i] - prefix[i + 1])
        if val > best[0]:
            best = (val, "gap", i, j)

    val, kind, i, j = best
    length = x2[j] - x2[i]
    count = j - i + 1 if kind == "run" else j - i - 1
    arc = beatty.TorusInterval(xs[i] % 1, length) if 0 < length < 1 else None
    return ErrorRow(q, a, val, count, arc, False)


def _rows_for_modulus(points, window_len: int, q: int) -> dict[int, ErrorRow]:
    """ErrorRow per reduced class a mod q, bucketing the window points once."""
    c = Fraction(window_len, arith.euler_phi(q))
    buckets = {}
    for m, pos, lam in points:
        buckets.setdefault(m % q, []).append((pos, lam))
    return {a: _row_from_pairs(buckets.get(a, []), c, q, a)
            for a in range(q) if math.gcd(a, q) == 1}


def e_sup(n: int, n2: int, gamma, q: int, a: int, table=None) -> ErrorRow:
    """Exact supremum of the arc-restricted progression error."""
    if not n < n2 <= 2 * n:
        raise PreconditionError("need N < N2 <= 2N", n=n, n2=n2)
    if q < 1:
        raise PreconditionError("q must be >= 1", q=q)
    if math.gcd(a, q) != 1:
        raise PreconditionError("a must be coprime to q", a=a, q=q)
    pairs = [(pos, lam) for m, pos, lam in _window_points(n, n2, gamma, table)
             if m % q == a % q]
    return _row_from_pairs(pairs, Fraction(n2 - n, arith.euler_phi(q)), q, a)


def bv_harness(config: HarnessConfig, table=None) -> list[dict]:
    """Large-sieve-flavored left side: per N, sum over q up to the policy
    cap of the worst progression error, with the normalized column
    LHS (log N)^A / N.  Nothing is asserted about decay."""
    rows = []
    for n in config.n_grid:
        n_lo, n_hi = config.window(n)
        big_l = math.log(n)
        if config.q_cap is not None:
            q_cap = config.q_cap
            r = None
        else:
            approx = dioph.approx_for_modulus(config.gamma, n)
            r = approx.denominator
            q_cap = int(min(r, n**0.25) * n**-config.eps)
        points = _window_points(n_lo, n_hi, config.gamma, table)
        terms = []
        lhs = Fraction(0)
        for q in range(1, q_cap + 1):
            best = None
            for a, row in sorted(_rows_for_modulus(points, n_hi - n_lo, q).items()):
                if best is None or row.e > best.e:
                    best = row
            if best is not None:
                terms.append((q, best.a, float(best.e)))
                lhs += best.e
        rows.append({"n": n, "r": r, "q_cap": q_cap, "lhs": float(lhs),
                     "normalized": float(lhs) * big_l**config.a_power / n,
                     "terms": terms})
    return rows


def bdh_harness(config: HarnessConfig, table=None) -> list[dict]:
    """Variance-flavored left side: per N, sum of E^2 over all progressions
    with q up to R, with the normalized column LHS / (N R log N
    (log log N)^2)."""
    rows = []
    for n in config.n_grid:
        n_lo, n_hi = config.window(n)
        big_l = math.log(n)
        r_cap = config.r_cap
        if r_cap is None:
            r_cap = max(1, int(n / big_l**config.a_power))
        if r_cap > n:
            raise PreconditionError("R must not exceed N", r_cap=r_cap, n=n)
        cost = sum(arith.euler_phi(q) for q in range(1, r_cap + 1))
        if cost * 40 > HARNESS_POINT_BUDGET:
            raise PreconditionError("R too large for the desk harness",
                                    progressions=cost)
        points = _window_points(n_lo, n_hi, config.gamma, table)
        lhs = Fraction(0)
        per_q = []
        for q in range(1, r_cap + 1):
            sub = Fraction(0)
            for a, row in sorted(_rows_for_modulus(points, n_hi - n_lo, q).items()):
                sub += row.e * row.e
            per_q.append((q, float(sub)))
            lhs += sub
        denom = n * r_cap * big_l * math.log(big_l) ** 2
        rows.append({"n": n, "r_cap": r_cap, "lhs": float(lhs),
                     "normalized": float(lhs) / denom, "per_q": per_q})
    return rows


def liouville_demo(r: int = 10, u: int = 3, n: int = 100, q_cap: int = 5,
                   delta: Fraction | None = None, table=None) -> dict:
    """Near-rational avoidance construction and its error lower bound.

    With gamma = u/r + delta and 0 < delta <= 1/(8 r N), every frac(gamma
    m) for m <= 2N stays within 1/(4r) of a multiple of 1/r, so the open
    arc (1/(4r), 3/(4r)) holds no points at all.  The arc has length
    1/(2r), hence E(N, 2N, gamma, q, a) >= N / (2 r phi(q)) for every
    progression, i.e. E^2 >= N^2 / (4 r^2 phi(q)).
    """
    if math.gcd(u, r) != 1:
        raise PreconditionError("u and r must be coprime", u=u, r=r)
    if delta is None:
        delta = Fraction(1, 8 * r * n)
    delta = _to_fraction(delta)
    if not 0 < delta <= Fraction(1, 8 * r * n):
        raise PreconditionError("delta must lie in (0, 1/(8rN)]",
                                delta=float(delta))
    gamma = Fraction(u, r) + delta
    lo, hi = Fraction(1, 4 * r), Fraction(3, 4 * r)
    in_arc = sum(1 for m in range(1, 2 * n + 1) if lo < (gamma * m) % 1 < hi)

    points = _window_points(n, 2 * n, gamma, table)
    rows = []
    total = Fraction(0)
    bound_total = Fraction(0)
    all_hold = True
    for q in range(1, q_cap + 1):
        phi = arith.euler_phi(q)
        bound = Fraction(n * n, 4 * r * r * phi)
        for a, row in sorted(_rows_for_modulus(points, n, q).items()):
            holds = row.e * row.e >= bound
            all_hold = all_hold and holds
            total += row.e * row.e
            rows.append({"q": q, "a": a, "e": float(row.e),
                         "bound_e2": float(bound), "holds": holds})
    for q in range(1, q_cap + 1):
        bound_total += Fraction(n * n, 4 * r * r * arith.euler_phi(q))
    return {"gamma": gamma, "delta": delta, "arc": (lo, hi),
            "points_in_arc": in_arc, "rows": rows,
            "sum_e2": float(total), "sum_bound": float(bound_total),
            "aggregate_holds": total >= bound_total,
            "all_progressions_hold": all_hold and in_arc == 0}


def _tau_3k(q: int, k: int, table=None) -> int:
    return arith.tau_k(q, 3 * k, table)


def _class_counts(values, q: int) -> list[int]:
    counts = [0] * q
    for v in values:
        counts[v % q] += 1
    return counts


def regcond_report(a_sets: dict, offsets, config: HarnessConfig,
                   rho=None, table=None) -> list[dict]:
    """Empirical left-hand sides of the two regularity sums, per N.

    The first sum weighs, per squarefree q up to N^theta, the worst class
    deviation |#{n in A : n = a mod q} - Y/q| by tau_{3k}(q); the second
    does the same for rho-weighted members of A whose h_m-shift also lies
    in A, against Y_{g,m}/phi(q) over classes coprime to q.  Both are
    normalized by their target envelopes Y / L^(k+eps); columns are
    recorded, never asserted.

    a_sets maps each grid N to the window set A.  When config.params is
    set, the shifted memberships are recomputed through the torus arc and
    cross-checked against the set route; mismatches are reported.
    """
    offsets = tuple(sorted(offsets))
    rows = []
    for n in config.n_grid:
        if n not in a_sets:
            raise PreconditionError("a_sets lacks a grid point", n=n)
        n_lo, n_hi = config.window(n)
        members = sorted(set(a_sets[n]))
        member_set = set(members)
        big_l = math.log(n)
        q_top = max(1, int(n**config.theta))
        y_val = config.y_value
        if y_val is None:
            y_val = float(_to_fraction(config.gamma) * n)
        envelope = float(y_val) / big_l ** (config.k + config.eps)

        lhs12 = 0.0
        for q in range(1, q_top + 1):
            if arith.mobius(q) == 0:
                continue
            counts = _class_counts(members, q)
            dev = max(abs(cnt - y_val / q) for cnt in counts)
            lhs12 += _tau_3k(q, config.k, table) * dev

        if rho is None:
            if table is not None and table.limit >= n_hi - 1:
                rho_fn = table.is_prime
            else:
                local = set(arith.primes_upto(n_hi - 1))
                rho_fn = lambda m: m in local
        else:
            rho_fn = rho

        lhs15 = {}
        norm15 = {}
        arc_match = {}
        quad = scipy.integrate.quad(lambda t: 1.0 / math.log(t), n_lo, n_hi)[0]
        for m_idx, h in enumerate(offsets):
            kept = [p for p in members
                    if p >= n_lo + h and p - h in member_set and rho_fn(p)]
            if config.params is not None:
                base = beatty.membership_interval(config.params)
                if h == 0:
                    arc = base
                else:
                    arc = beatty.shift_intersection(
                        base, config.params, h,
                        config.params.gamma_exact * Fraction(config.eps))
                via_arc = [p for p in range(n_lo + h, n_hi)
                           if rho_fn(p)
                           and arc.contains((config.params.gamma_exact * p) % 1)]
                arc_match[m_idx] = via_arc == kept
                length = arc.length
            else:
                length = None
            if config.y_gm and (1, m_idx) in config.y_gm:
                y_gm = float(config.y_gm[(1, m_idx)])
            elif length is not None:
                y_gm = float(length) * quad
            else:
                y_gm = float(y_val) / big_l
            total = 0.0
            for q in range(1, q_top + 1):
                if arith.mobius(q) == 0:
                    continue
                counts = _class_counts(kept, q)
                phi = arith.euler_phi(q)
                dev = max(abs(counts[a] - y_gm / phi)
                          for a in range(q) if math.gcd(a, q) == 1)
                total += _tau_3k(q, config.k, table) * dev
            lhs15[m_idx] = total
            norm15[m_idx] = total / envelope if envelope else math.inf

        rows.append({"n": n, "q_top": q_top, "y": float(y_val),
                     "lhs12": lhs12,
                     "norm12": lhs12 / envelope if envelope else math.inf,
                     "lhs15": lhs15, "norm15": norm15,
                     "arc_route_matches": arc_match})
    return rows
