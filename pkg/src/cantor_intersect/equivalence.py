"""Decision procedures on translations written with nonnegative differences.

For a sparse digit set and a code α over Δ⁺, the normalized intersection
C(α) is the set of sums Σ x_k n^-k with x_k drawn from the slice D_{α_k}.
Everything in this module works on the slice sequence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .digitset import DigitSet, SliceSet, classify, is_sparse_digits, slice_of, sumset_decompose
from .errors import (BadDelta, BudgetExceeded, NotApplicable, NotInF, NotRepresentable,
                     NotSparse, NotUniform, SigmaNotPM)
from .intervals import DEFAULT_BUDGET, iter_levels
from .kernel import to_delta_plus
from .measure import (DimensionValue, MeasureValue, counting_measure, measure_scaled,
                      measure_two_digit)
from .radix import (Alphabet, PeriodicCode, code_from_rational,
                    has_finite_expansion, value_of)


def _require_sparse(ds: DigitSet) -> None:
    if not classify(ds).sparse:
        raise NotSparse("requires a sparse digit set")


def _plus_code(ds: DigitSet, code: PeriodicCode) -> PeriodicCode:
    try:
        y, _, _ = to_delta_plus(ds, code)
    except SigmaNotPM as exc:
        raise NotInF("the translation is not a difference of two points of C") from exc
    return y


@dataclass(frozen=True)
class SliceSequence:
    """D_{α_1}, D_{α_2}, ... stored as preperiod and period (members only)."""

    base: int
    preperiod: tuple[tuple[int, ...], ...]
    period: tuple[tuple[int, ...], ...]
    inf: Fraction
    complete: bool

    def at(self, j: int) -> tuple[int, ...]:
        k = len(self.preperiod)
        if j <= k:
            return self.preperiod[j - 1]
        if not self.period:
            raise IndexError(f"only {k} slices are known")
        return self.period[(j - k - 1) % len(self.period)]

    @property
    def known_length(self) -> int:
        return len(self.preperiod) + len(self.period)


def _slices(ds: DigitSet, code: PeriodicCode, count: int) -> list[SliceSet]:
    out = []
    for j in range(1, count + 1):
        s = slice_of(ds, code.digit_at(j))
        if s.empty:
            raise NotInF(f"D and D + {code.digit_at(j)} are disjoint (digit {j})")
        out.append(s)
    return out


def slice_sequence(ds: DigitSet, alpha: PeriodicCode) -> SliceSequence:
    _require_sparse(ds)
    alpha = _plus_code(ds, alpha)
    n = ds.base
    pre = _slices(ds, alpha, len(alpha.preperiod))
    per = _slices(ds, PeriodicCode(n, (), alpha.period, Alphabet.DELTA_PLUS),
                  len(alpha.period)) if alpha.period else []
    mins = PeriodicCode(n, [s.offset for s in pre], [s.offset for s in per])
    members_pre = tuple(s.members for s in pre)
    members_per = tuple(s.members for s in per)
    if members_per:
        members_pre, members_per = _reduce_words(members_pre, members_per)
    return SliceSequence(n, members_pre, members_per, value_of(mins), not alpha.is_prefix)


def _reduce_words(pre: tuple, per: tuple):
    p = len(per)
    for d in range(1, p + 1):
        if p % d == 0 and per == per[:d] * (p // d):
            per = per[:d]
            break
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1:] + per[:-1]
    return pre, per


@dataclass(frozen=True)
class EquivalenceResult:
    equal: bool
    witness_k: int | None
    decided: bool

    def to_dict(self) -> dict:
        return {"equal": self.equal, "witness_k": self.witness_k, "decided": self.decided}


def equivalent(ds: DigitSet, alpha: PeriodicCode, gamma: PeriodicCode) -> EquivalenceResult:
    """Whether C(α) = C(γ), decided slice by slice.

    Prefix codes are compared only as far as both are known; a mismatch is
    still a proof of inequality, agreement leaves the answer undecided.
    """
    a = slice_sequence(ds, alpha)
    g = slice_sequence(ds, gamma)
    if a.complete and g.complete:
        span = max(len(a.preperiod), len(g.preperiod)) + math.lcm(len(a.period), len(g.period))
    else:
        span = min(a.known_length if not a.complete else 10 ** 9,
                   g.known_length if not g.complete else 10 ** 9)
    for j in range(1, span + 1):
        if a.at(j) != g.at(j):
            return EquivalenceResult(False, j, True)
    return EquivalenceResult(True, None, a.complete and g.complete)


@dataclass(frozen=True)
class RationalResult:
    verdict: str
    k: int | None
    q: int | None
    gamma: PeriodicCode | None
    violations: dict[int, int | None] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "k": self.k, "q": self.q,
                "gamma": None if self.gamma is None else self.gamma.to_dict(),
                "violations": {str(q): j for q, j in self.violations.items()}}


def _subset(a: Sequence[int], b: Sequence[int]) -> bool:
    return set(a) <= set(b)


def _stabilized_gamma(alpha: PeriodicCode, slices: Callable[[int], tuple], k: int, q: int,
                      available: int | None) -> PeriodicCode:
    """0.α_1..α_k followed by the periodic block where each chain j, j+q, ... stops growing."""
    shift = 0
    for i in range(1, q + 1):
        h = 0
        while True:
            nxt = k + i + (h + 1) * q
            if available is not None and nxt > available:
                break
            if available is None and h > 64:
                break
            if slices(k + i + h * q) == slices(nxt):
                break
            h += 1
        shift = max(shift, h)
    block = [alpha.digit_at(k + i + shift * q) for i in range(1, q + 1)]
    return PeriodicCode(alpha.base, alpha.digits(k), block, Alphabet.DELTA_PLUS)


def rational_equivalent(ds: DigitSet, alpha: PeriodicCode, kmax: int | None = None,
                        qmax: int | None = None) -> RationalResult:
    """Search for k, q with D_{α_j} ⊆ D_{α_{j+q}} for every j > k."""
    _require_sparse(ds)
    alpha = _plus_code(ds, alpha)
    seq = slice_sequence(ds, alpha)
    if seq.complete:
        k, q = len(alpha.preperiod), len(alpha.period)
        gamma = _stabilized_gamma(alpha, seq.at, k, q, None)
        return RationalResult("YES", k, q, gamma)
    length = seq.known_length
    qmax = qmax if qmax is not None else max(1, length // 4)
    kmax = kmax if kmax is not None else length // 2
    violations: dict[int, int | None] = {}
    best = None
    for q in range(1, qmax + 1):
        last = None
        for j in range(1, length - q + 1):
            if not _subset(seq.at(j), seq.at(j + q)):
                last = j
        violations[q] = last
        k = last or 0
        if k <= kmax and k + q < length and (best is None or (k, q) < best):
            best = (k, q)
    gamma = None
    if best is not None:
        gamma = _stabilized_gamma(alpha, seq.at, best[0], best[1], length)
    return RationalResult("UNDECIDED_PREFIX", best and best[0], best and best[1], gamma,
                          violations)


@dataclass(frozen=True)
class FiniteResult:
    finite: bool
    points: tuple[Fraction, ...] | None
    gamma: PeriodicCode | None


def is_finite(ds: DigitSet, alpha: PeriodicCode, budget: int = DEFAULT_BUDGET) -> FiniteResult:
    _require_sparse(ds)
    alpha = _plus_code(ds, alpha)
    if alpha.is_prefix:
        raise ValueError("finiteness needs an eventually periodic code")
    n = ds.base
    a = len(alpha.preperiod)
    period_slices = _slices(ds, PeriodicCode(n, (), alpha.period, Alphabet.DELTA_PLUS),
                            len(alpha.period))
    if any(len(s) > 1 for s in period_slices):
        return FiniteResult(False, None, None)
    pre_slices = _slices(ds, alpha, a)
    choices = [[s.offset + x for x in s.members] for s in pre_slices]
    total = math.prod(len(c) for c in choices)
    if total > budget:
        raise BudgetExceeded(total, budget)
    tail = value_of(PeriodicCode(n, (), [s.offset for s in period_slices]))
    points = sorted({Fraction(sum(x * n ** (a - i) for i, x in enumerate(xs, 1)), n ** a)
                     + tail / n ** a for xs in itertools.product(*choices)})
    wide = [j for j, s in enumerate(pre_slices, 1) if len(s) > 1]
    k = max(wide, default=0)
    gamma = PeriodicCode(n, alpha.digits(k), (ds.max_digit,), Alphabet.DELTA_PLUS)
    return FiniteResult(True, tuple(points), gamma)


@dataclass(frozen=True)
class StrongPeriodicity:
    sp: bool
    q: int | None
    tilde: tuple[tuple[int, ...], ...] | None
    subset_condition_q: int | None

    def to_dict(self) -> dict:
        return {"sp": self.sp, "q": self.q,
                "tilde": None if self.tilde is None else [list(t) for t in self.tilde],
                "subset_condition_q": self.subset_condition_q}


def _search_q(seq: SliceSequence, test) -> tuple[int | None, list | None]:
    a, p = len(seq.preperiod), len(seq.period)
    # for q >= a the pairs (j, j+q) only depend on q mod p, and j ≤ a+p covers every pair
    for q in range(1, 4 * p + a + 1):
        witnesses = []
        for j in range(1, a + p + 1):
            w = test(seq.at(j), seq.at(j + q))
            if w is None:
                break
            witnesses.append(w)
        else:
            return q, witnesses
    return None, None


def strongly_periodic(ds: DigitSet, alpha: PeriodicCode) -> StrongPeriodicity:
    """Find q with D_{α_j} + D̃_j = D_{α_{j+q}} for all j, with witnesses D̃_j."""
    _require_sparse(ds)
    seq = slice_sequence(ds, alpha)
    if not seq.complete:
        raise ValueError("strong periodicity needs an eventually periodic code")
    sub_q, _ = _search_q(seq, lambda s, t: () if _subset(s, t) else None)
    if classify(ds).uniform:
        q = sub_q
        if q is None:
            return StrongPeriodicity(False, None, None, None)
        tilde = [sumset_decompose(seq.at(j + q), seq.at(j))
                 for j in range(1, len(seq.preperiod) + len(seq.period) + 1)]
        assert all(t is not None for t in tilde), "uniform digit sets decompose"
        return StrongPeriodicity(True, q, tuple(tilde), sub_q)
    q, tilde = _search_q(seq, lambda s, t: sumset_decompose(t, s))
    if q is None:
        return StrongPeriodicity(False, None, None, sub_q)
    return StrongPeriodicity(True, q, tuple(tilde), sub_q)


@dataclass(frozen=True)
class SimilaritySystem:
    """Maps x -> ratio * x + b whose attractor is C(α)."""

    ratio: Fraction
    block: int
    map_count: int
    offsets: tuple[Fraction, ...] | None
    hull_disjoint: bool | None
    diameter: Fraction

    def to_dict(self) -> dict:
        return {"ratio": str(self.ratio), "block": self.block, "map_count": self.map_count,
                "offsets": None if self.offsets is None else [str(b) for b in self.offsets],
                "hull_disjoint": self.hull_disjoint, "diameter": str(self.diameter)}


def similarity_system(ds: DigitSet, alpha: PeriodicCode, sp: StrongPeriodicity | None = None,
                      max_maps: int = 4096) -> SimilaritySystem:
    """Block the slices into length-L words with D_j + D̃_j = D_{j+L} for j ≤ L.

    Each map contributes digits y_k from D_{α_k} at positions k ≤ L and
    z_k from D̃_k at positions L + k.
    """
    seq = slice_sequence(ds, alpha)
    sp = sp or strongly_periodic(ds, alpha)
    if not sp.sp:
        raise NotApplicable("similarity maps exist only for strongly periodic codes")
    a, p = len(seq.preperiod), len(seq.period)
    step = math.lcm(sp.q, p)
    block = step * max(1, -(-a // step))
    n = ds.base
    tails = []
    for j in range(1, block + 1):
        t = sumset_decompose(seq.at(j + block), seq.at(j))
        assert t is not None, "chained decompositions compose"
        tails.append(t)
    count = math.prod(len(seq.at(j)) * len(tails[j - 1]) for j in range(1, block + 1))
    maxes = PeriodicCode(n, [max(s) for s in seq.preperiod], [max(s) for s in seq.period])
    diameter = value_of(maxes)
    ratio = Fraction(1, n ** block)
    if count > max_maps:
        return SimilaritySystem(ratio, block, count, None, None, diameter)
    heads = itertools.product(*(seq.at(j) for j in range(1, block + 1)))
    head_vals = sorted({Fraction(_word(ys, n), n ** block) for ys in heads})
    tail_vals = sorted({Fraction(_word(zs, n), n ** block) for zs in itertools.product(*tails)})
    offsets = sorted(h + ratio * z for h in head_vals for z in tail_vals)
    gaps_ok = all(b - a >= ratio * diameter for a, b in zip(offsets, offsets[1:]))
    return SimilaritySystem(ratio, block, count, tuple(offsets), gaps_ok, diameter)


def _word(digits: Iterable[int], n: int) -> int:
    v = 0
    for d in digits:
        v = v * n + d
    return v


@dataclass(frozen=True)
class SelfSimilarReport:
    verdict: str
    route: str
    y: PeriodicCode
    shift: Fraction
    k: int
    q: int
    E: tuple[int, ...]
    E_base: int
    E_doubled: tuple[int, ...] | None
    copies: int
    offsets: tuple[Fraction, ...]
    inf: Fraction
    dimension: DimensionValue
    measure: MeasureValue | None
    measure_note: str | None
    points: tuple[Fraction, ...] | None
    strong: StrongPeriodicity
    similarity: SimilaritySystem | None
    rational: RationalResult
    sign: int = 1
    digit_points: tuple[Fraction, ...] | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "route": self.route,
            "y": self.y.to_dict(),
            "shift": str(self.shift),
            "k": self.k,
            "q": self.q,
            "E": list(self.E),
            "E_base": self.E_base,
            "E_doubled": None if self.E_doubled is None else list(self.E_doubled),
            "copies": self.copies,
            "scale": str(Fraction(1, self.y.base ** self.k)),
            "offsets": [str(x) for x in self.offsets],
            "inf": str(self.inf),
            "dimension": self.dimension.to_dict(),
            "measure": None if self.measure is None else self.measure.to_dict(),
            "measure_note": self.measure_note,
            "points": None if self.points is None else [str(x) for x in self.points],
            "strongly_periodic": self.strong.to_dict(),
            "similarity": None if self.similarity is None else self.similarity.to_dict(),
            "rational": self.rational.to_dict(),
            "sign": self.sign,
            "digit_points": (None if self.digit_points is None else
                             [str(x) for x in self.digit_points]),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SelfSimilarReport":
        sim = data["similarity"]
        sp = data["strongly_periodic"]
        rat = data["rational"]
        return cls(
            verdict=data["verdict"], route=data["route"],
            y=PeriodicCode.from_dict(data["y"]), shift=Fraction(data["shift"]),
            k=data["k"], q=data["q"], E=tuple(data["E"]), E_base=data["E_base"],
            E_doubled=None if data["E_doubled"] is None else tuple(data["E_doubled"]),
            copies=data["copies"], offsets=tuple(Fraction(x) for x in data["offsets"]),
            inf=Fraction(data["inf"]),
            dimension=DimensionValue.from_dict(data["dimension"]),
            measure=None if data["measure"] is None else MeasureValue.from_dict(data["measure"]),
            measure_note=data["measure_note"],
            points=None if data["points"] is None else tuple(Fraction(x) for x in data["points"]),
            strong=StrongPeriodicity(sp["sp"], sp["q"],
                                     None if sp["tilde"] is None else
                                     tuple(tuple(t) for t in sp["tilde"]),
                                     sp["subset_condition_q"]),
            similarity=None if sim is None else SimilaritySystem(
                Fraction(sim["ratio"]), sim["block"], sim["map_count"],
                None if sim["offsets"] is None else tuple(Fraction(b) for b in sim["offsets"]),
                sim["hull_disjoint"], Fraction(sim["diameter"])),
            rational=RationalResult(rat["verdict"], rat["k"], rat["q"],
                                    None if rat["gamma"] is None else
                                    PeriodicCode.from_dict(rat["gamma"]),
                                    {int(q): j for q, j in rat["violations"].items()}),
            sign=data.get("sign", 1),
            digit_points=(None if data.get("digit_points") is None else
                          tuple(Fraction(x) for x in data["digit_points"])),
        )


def self_similar_report(ds: DigitSet, code: PeriodicCode, budget: int = DEFAULT_BUDGET,
                        sign: int = 1) -> SelfSimilarReport:
    """Structure of C ∩ (C + t) for an eventually periodic t.

    C ∩ (C + t) is the disjoint union of ``copies`` translates
    eta + n^-k B with B = C_{n^q, E}.
    """
    _require_sparse(ds)
    if code.is_prefix:
        raise ValueError("a full report needs an eventually periodic code")
    try:
        y, shift, route = to_delta_plus(ds, code)
    except SigmaNotPM as exc:
        raise NotInF("the translation is not a difference of two points of C") from exc
    n = ds.base
    k, q = len(y.preperiod), len(y.period)
    digits = ds.digit_set

    def survivors(x: int) -> list[int]:
        return sorted(digits & {d + x for d in ds.digits})

    for x in y.preperiod + y.period:
        if not survivors(x):
            raise NotInF(f"D and D + {x} are disjoint")
    big = n ** q
    E = sorted(_word(us, n) for us in itertools.product(*(survivors(x) for x in y.period)))
    if len(E) > 1:
        assert is_sparse_digits(E), "E inherits sparseness from D"
    heads = [_word(us, n) for us in itertools.product(*(survivors(x) for x in y.preperiod))]
    if len(heads) > budget:
        raise BudgetExceeded(len(heads), budget)
    scale = Fraction(1, n ** k)
    etas = tuple(sorted(h * scale - shift for h in heads))
    inf = etas[0] + scale * Fraction(E[0], big - 1)
    dim = DimensionValue(len(E), big)
    original_p = len(code.period)
    doubled = None
    if q == original_p:
        doubled = tuple(sorted(e * big + f for e in E for f in E))

    rational = rational_equivalent(ds, y)
    strong = strongly_periodic(ds, y)
    fin = is_finite(ds, y, budget)
    points = None
    similarity = None
    note = None
    measure = None
    digit_points = None
    if fin.finite:
        verdict = "FINITE"
        digit_points = tuple(sorted(p - shift for p in fin.points))
        points = digit_points
        if code.alphabet is not Alphabet.DELTA and has_finite_expansion(value_of(code), n):
            points = exact_points(ds, code, budget) or points
        measure = counting_measure(len(points), n)
    else:
        verdict = "STRONGLY_PERIODIC" if strong.sp else "RATIONAL_EQUIVALENT"
        if strong.sp:
            similarity = similarity_system(ds, y, strong)
        if len(E) == 2:
            measure = measure_scaled(len(heads), scale, measure_two_digit(big, E[0], E[1]))
        else:
            note = f"closed form needs a two-digit E, this E has {len(E)} digits"
    if sign < 0:
        # C ∩ (C - t) is C ∩ (C + t) moved left by t
        t = value_of(code)
        etas = tuple(e - t for e in etas)
        inf -= t
        if points is not None:
            points = tuple(x - t for x in points)
            digit_points = tuple(x - t for x in digit_points)
    return SelfSimilarReport(verdict, route, y, shift, k, q, tuple(E), big, doubled,
                             len(heads), etas, inf, dim, measure, note, points, strong,
                             similarity, rational, sign, digit_points)


def in_cantor(ds: DigitSet, x: Fraction) -> bool:
    try:
        code_from_rational(x, ds.base, Alphabet.D_ONLY, ds)
    except NotRepresentable:
        return False
    return True


def exact_points(ds: DigitSet, code: PeriodicCode, budget: int = DEFAULT_BUDGET,
                 max_depth: int | None = None) -> tuple[Fraction, ...] | None:
    """C ∩ (C + t) read off the brute-force levels once no piece has positive length.

    A terminating t has two expansions, and points of the intersection may use
    a different one for x and for x - t, which the slice formula cannot see.
    Returns None if positive-length pieces survive up to ``max_depth``.
    """
    t = value_of(code)
    depth = max_depth if max_depth is not None else 2 * code.known_length + 4
    try:
        for res in iter_levels(ds, code, depth, budget):
            if len(res.tight) == 0:
                return tuple(p for p in res.points if in_cantor(ds, p) and in_cantor(ds, p - t))
    except BudgetExceeded:
        return None
    return None


@dataclass(frozen=True)
class NonEquivalent:
    gamma: PeriodicCode
    index: int
    period: int
    index_set: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"gamma": self.gamma.to_dict(), "index": self.index, "period": self.period,
                "index_set": list(self.index_set)}


def thue_morse(count: int) -> list[int]:
    return [bin(i).count("1") % 2 for i in range(count)]


def generate_nonequivalent(ds: DigitSet, alpha: PeriodicCode, delta: int,
                           bits: Iterable[int], depth: int) -> NonEquivalent:
    """Replace α at the slots i, i+p, i+2p, ... by δ wherever the bit is 0.

    For aperiodic bits the result is not equivalent to any rational.
    """
    _require_sparse(ds)
    if ds.max_digit >= ds.base:
        raise NotApplicable("needs d_m < n")
    alpha = _plus_code(ds, alpha)
    if alpha.is_prefix:
        raise NotApplicable("the seed translation must be eventually periodic")
    if is_finite(ds, alpha).finite:
        raise NotApplicable("the seed translation gives a finite intersection")
    target = slice_of(ds, delta)
    if target.empty or delta < 0:
        raise BadDelta(f"{delta} is not a nonnegative difference of digits")
    a, p = len(alpha.preperiod), len(alpha.period)
    index = None
    for i in range(a + 1, a + p + 1):
        s = slice_of(ds, alpha.digit_at(i))
        if len(s) > 1 and not s.issubset(target):
            index = i
            break
    if index is None:
        raise BadDelta(f"every wide slice of the seed is contained in D_{delta}")
    bits = list(itertools.islice(iter(bits), (depth - index) // p + 1 if depth >= index else 0))
    out = []
    for j in range(1, depth + 1):
        if j >= index and (j - index) % p == 0:
            h = (j - index) // p
            if h >= len(bits):
                raise ValueError("not enough bits for the requested depth")
            out.append(alpha.digit_at(j) if bits[h] else delta)
        else:
            out.append(alpha.digit_at(j))
    gamma = PeriodicCode(ds.base, out, (), Alphabet.DELTA_PLUS)
    kept = tuple(h for h in range(len(bits))
                 if slice_of(ds, gamma.digit_at(index + h * p)).members
                 == slice_of(ds, alpha.digit_at(index + h * p)).members)
    return NonEquivalent(gamma, index, p, kept)


def uniform_hat(ds: DigitSet, alpha: PeriodicCode) -> PeriodicCode:
    """α̂_k = d_m - |α_k|."""
    if not classify(ds).uniform:
        raise NotUniform("requires a uniform digit set")
    dm = ds.max_digit
    if alpha.is_prefix:
        return PeriodicCode(ds.base, [dm - abs(x) for x in alpha.preperiod], (), Alphabet.D_ONLY)
    return PeriodicCode(ds.base, [dm - abs(x) for x in alpha.preperiod],
                        [dm - abs(x) for x in alpha.period], Alphabet.D_ONLY)


def uv_alignment(hat: PeriodicCode, max_p: int | None = None):
    """Smallest p with hat = 0.u_1..u_p (v_1..v_p) and u ≤ v componentwise."""
    a, per = len(hat.preperiod), len(hat.period)
    max_p = max_p if max_p is not None else 2 * (a + per)
    for p in range(1, max_p + 1):
        horizon = max(p, a) + 2 * math.lcm(p, per)
        if any(hat.digit_at(j) != hat.digit_at(j + p) for j in range(p + 1, horizon + 1)):
            continue
        u = hat.digits(p)
        v = [hat.digit_at(j) for j in range(p + 1, 2 * p + 1)]
        if all(x <= y for x, y in zip(u, v)):
            return p, tuple(u), tuple(v)
    return None
