"""Exact arithmetic for the failure-probability recurrences and the
round lower-bound formulas.

Values live in log2 space as c + sum(w_i * log2(a_i)) with rational c, w_i
and integer atoms a_i >= 3 kept pairwise coprime and free of perfect powers.
In that canonical form the representation is unique, so equality is
syntactic; strict comparisons refine validated intervals until the sign of
the difference is determined (termination is guaranteed because a nonzero
canonical form denotes a nonzero real).
"""

from fractions import Fraction
import math

from mpmath import iv, mp

from .errors import CapExceeded

_ATOM_BIT_CAP = 10 ** 7


def _perfect_power(n):
    """(base, exponent) with exponent maximal, or None."""
    if n < 4:
        return None
    for k in range(n.bit_length(), 1, -1):
        root = round(n ** (1.0 / k)) if n.bit_length() < 50 else None
        if root is None:
            lo, hi = 1, 1 << (n.bit_length() // k + 1)
            while lo < hi:
                mid = (lo + hi) // 2
                if mid ** k < n:
                    lo = mid + 1
                else:
                    hi = mid
            root = lo
        for cand in (root - 1, root, root + 1):
            if cand >= 2 and cand ** k == n:
                return cand, k
    return None


class _WeightPair:
    """A pair of Fraction weights, used to refine two values in one basis."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __add__(self, other):
        return _WeightPair(self.a + other.a, self.b + other.b)

    def __mul__(self, k):
        return _WeightPair(self.a * k, self.b * k)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, _WeightPair):
            return self.a == other.a and self.b == other.b
        return not self and other == 0

    __hash__ = None


def _coprime_basis(atoms, zero=Fraction(0)):
    """Refine {atom: weight} into pairwise-coprime, power-free atoms with
    powers of two folded into the rational part.  Returns (rational_shift,
    {atom: weight})."""
    shift = zero
    work = dict(atoms)
    changed = True
    while changed:
        changed = False
        items = sorted(work.items())
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                a, wa = items[i]
                b, wb = items[j]
                if a not in work or b not in work:
                    continue
                g = math.gcd(a, b)
                if g == 1 or g == a == b:
                    continue
                # split both along g
                del work[a]
                del work[b]
                for base, weight in ((g, wa + wb), (a // g, wa), (b // g, wb)):
                    if base > 1 and weight:
                        work[base] = work.get(base, zero) + weight
                changed = True
        if changed:
            continue
        for a, w in list(work.items()):
            if w == 0 or a == 1:
                del work[a]
                changed = True
                continue
            if a % 2 == 0:
                e2 = (a & -a).bit_length() - 1
                shift += w * e2
                del work[a]
                odd = a >> e2
                if odd > 1:
                    work[odd] = work.get(odd, zero) + w
                changed = True
                continue
            pp = _perfect_power(a)
            if pp is not None:
                base, k = pp
                del work[a]
                work[base] = work.get(base, zero) + w * k
                changed = True
    return shift, work


class LogLin:
    """An exact real c + sum(w * log2(a)) in canonical form."""

    __slots__ = ("const", "atoms")

    def __init__(self, const=0, atoms=None):
        shift, canon = _coprime_basis(atoms or {})
        self.const = Fraction(const) + shift
        self.atoms = canon

    @classmethod
    def rational(cls, value):
        return cls(Fraction(value), {})

    @classmethod
    def log2_of_int(cls, n):
        if n <= 0:
            raise ValueError("logarithm of a non-positive integer")
        if n.bit_length() > _ATOM_BIT_CAP:
            raise CapExceeded("integer too large for exact logarithms")
        if n == 1:
            return cls.rational(0)
        return cls(0, {n: Fraction(1)})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogLin.rational(other)
        atoms = dict(self.atoms)
        for a, w in other.atoms.items():
            atoms[a] = atoms.get(a, Fraction(0)) + w
        return LogLin(self.const + other.const, atoms)

    def __neg__(self):
        return LogLin(-self.const, {a: -w for a, w in self.atoms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogLin.rational(other)
        return self + (-other)

    def scale(self, factor):
        factor = Fraction(factor)
        if factor == 0:
            return LogLin.rational(0)
        return LogLin(self.const * factor,
                      {a: w * factor for a, w in self.atoms.items()})

    def is_zero(self):
        return self.const == 0 and not self.atoms

    def is_rational(self):
        return not self.atoms

    def as_fraction(self):
        if not self.is_rational():
            return None
        return self.const

    def ratio_to(self, other):
        """Exact Fraction r with self = r * other, or None.

        The two values may have been built independently, so their atom
        bases are refined jointly before comparing weights.
        """
        if other.is_zero():
            return None
        if self.is_zero():
            return Fraction(0)
        merged = {}
        for a, w in self.atoms.items():
            merged[a] = _WeightPair(w, 0)
        for a, w in other.atoms.items():
            merged[a] = merged.get(a, _WeightPair()) + _WeightPair(0, w)
        shift, canon = _coprime_basis(merged, zero=_WeightPair())
        c_self = self.const + shift.a
        c_other = other.const + shift.b
        r = None
        for w in canon.values():
            if w.b:
                r = w.a / w.b
                break
        if r is None:
            if not c_other:
                return None
            r = c_self / c_other
        for w in canon.values():
            if w.a != w.b * r:
                return None
        if c_self != c_other * r:
            return None
        return r

    def _interval(self, prec):
        old = iv.prec
        iv.prec = prec
        try:
            total = iv.mpf(self.const.numerator) / iv.mpf(self.const.denominator)
            for a, w in self.atoms.items():
                la = iv.log(iv.mpf(a)) / iv.log(iv.mpf(2))
                total += la * iv.mpf(w.numerator) / iv.mpf(w.denominator)
            return total
        finally:
            iv.prec = old

    def sign(self):
        if self.is_zero():
            return 0
        if self.is_rational():
            return -1 if self.const < 0 else 1
        prec = 64
        while True:
            box = self._interval(prec)
            if box > 0:
                return 1
            if box < 0:
                return -1
            prec *= 2
            if prec > 1 << 22:
                raise CapExceeded("sign refinement exceeded precision cap")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogLin.rational(other)
        # Two values built independently may carry different (yet equally
        # canonical) atom bases; subtraction refines them jointly.
        return (self - other).is_zero()

    __hash__ = None

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return self == other or self > other

    def floor(self):
        if self.is_rational():
            return self.const.numerator // self.const.denominator
        approx = self.to_float()
        for m in (math.floor(approx) - 1, math.floor(approx),
                  math.floor(approx) + 1):
            if LogLin.rational(m) <= self and self < LogLin.rational(m + 1):
                return m
        raise CapExceeded("floor refinement failed")

    def to_float(self):
        val = float(self.const)
        for a, w in self.atoms.items():
            val += float(w) * (a.bit_length() - 1 + math.log2(
                a / (1 << (a.bit_length() - 1))))
        return val

    def describe(self):
        parts = []
        if self.const or not self.atoms:
            parts.append(str(self.const))
        for a, w in sorted(self.atoms.items()):
            parts.append("%s*log2(%d)" % (w, a))
        return " + ".join(parts)

    def __repr__(self):
        return "LogLin(%s)" % self.describe()


class ExtendedLogReal:
    """A nonnegative real, either zero or 2**log2_value."""

    __slots__ = ("kind", "log2_value")

    ZERO = "zero"
    POSITIVE = "positive"

    def __init__(self, kind, log2_value=None):
        if kind not in (self.ZERO, self.POSITIVE):
            raise ValueError("bad kind")
        self.kind = kind
        self.log2_value = log2_value if kind == self.POSITIVE else None

    @classmethod
    def zero(cls):
        return cls(cls.ZERO)

    @classmethod
    def one(cls):
        return cls(cls.POSITIVE, LogLin.rational(0))

    @classmethod
    def from_log2(cls, log2_value):
        if isinstance(log2_value, (int, Fraction)):
            log2_value = LogLin.rational(log2_value)
        return cls(cls.POSITIVE, log2_value)

    @classmethod
    def from_int(cls, n):
        if n < 0:
            raise ValueError("negative")
        if n == 0:
            return cls.zero()
        return cls(cls.POSITIVE, LogLin.log2_of_int(n))

    def is_zero(self):
        return self.kind == self.ZERO

    def mul(self, other):
        if self.is_zero() or other.is_zero():
            return ExtendedLogReal.zero()
        return ExtendedLogReal.from_log2(self.log2_value + other.log2_value)

    def pow(self, exponent):
        exponent = Fraction(exponent)
        if self.is_zero():
            if exponent <= 0:
                raise ValueError("zero to a non-positive power")
            return ExtendedLogReal.zero()
        return ExtendedLogReal.from_log2(self.log2_value.scale(exponent))

    def cmp(self, other):
        if self.is_zero() and other.is_zero():
            return 0
        if self.is_zero():
            return -1
        if other.is_zero():
            return 1
        return (self.log2_value - other.log2_value).sign()

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __eq__(self, other):
        return isinstance(other, ExtendedLogReal) and self.cmp(other) == 0

    def capped_at_one(self):
        """(value min 1, was_capped)."""
        one = ExtendedLogReal.one()
        if one.cmp(self) < 0:
            return one, True
        return self, False

    def describe(self):
        if self.is_zero():
            return "0"
        return "2^(%s)" % self.log2_value.describe()

    def __repr__(self):
        return "ExtendedLogReal(%s)" % self.describe()


# -- parsing ---------------------------------------------------------------


def parse_quantity(text):
    """An integer or a right-associated power tower `a^b^c`; returns the
    exact log2 of the value as a LogLin (the value itself may be too large
    to materialize)."""
    if isinstance(text, int):
        return LogLin.log2_of_int(text)
    parts = str(text).strip().split("^")
    values = [int(p) for p in parts]
    if any(v <= 0 for v in values):
        raise ValueError("tower entries must be positive")
    exponent = 1
    for v in reversed(values[1:]):
        exponent = v ** exponent if exponent < (1 << 20) else None
        if exponent is None or exponent.bit_length() > _ATOM_BIT_CAP:
            raise CapExceeded("tower exponent too large")
    base = values[0]
    return LogLin.log2_of_int(base).scale(exponent)


def _exact_inner_log(log2_value):
    """log2(x) as a LogLin given log2 of x, when exactly representable
    (i.e. log2 x is a positive integer or an integer multiple of log2 of an
    integer); None otherwise."""
    frac = log2_value.as_fraction()
    if frac is not None:
        if frac <= 0 or frac.denominator != 1:
            return None
        return LogLin.log2_of_int(frac.numerator)
    if log2_value.const == 0 and len(log2_value.atoms) == 1:
        ((a, w),) = log2_value.atoms.items()
        if w.denominator == 1 and w > 0:
            # log2(w * log2 a) is exact only when it splits into integers;
            # handled only for w = 1 with integer log2(a) impossible here
            return None
    return None


# -- the operations --------------------------------------------------------


def _as_probability(p):
    if isinstance(p, ExtendedLogReal):
        value = p
    elif isinstance(p, str):
        text = p.strip()
        if text.startswith("2^"):
            value = ExtendedLogReal.from_log2(Fraction(text[2:]))
        else:
            frac = Fraction(text)
            if frac == 0:
                value = ExtendedLogReal.zero()
            else:
                value = ExtendedLogReal.from_log2(
                    LogLin.log2_of_int(frac.numerator)
                    - LogLin.log2_of_int(frac.denominator))
    else:
        frac = Fraction(p)
        if frac == 0:
            value = ExtendedLogReal.zero()
        else:
            value = ExtendedLogReal.from_log2(
                LogLin.log2_of_int(frac.numerator)
                - LogLin.log2_of_int(frac.denominator))
    if value.is_zero():
        return value
    if ExtendedLogReal.one().cmp(value) < 0:
        raise ValueError("probability above 1")
    return value


def blowup_parameter(delta, n_in_labels, T):
    """The exact integer (3*|labels_in|)**(2*delta**(2T+2))."""
    exponent = 2 * delta ** (2 * T + 2)
    base = 3 * n_in_labels
    bits = exponent * (base.bit_length())
    if bits > _ATOM_BIT_CAP:
        raise CapExceeded("blowup parameter too large to materialize")
    return base ** exponent


class CappedProbability:
    """A probability bound together with whether the cap at one fired."""

    __slots__ = ("value", "capped")

    def __init__(self, value, capped):
        self.value = value
        self.capped = capped

    def describe(self):
        text = self.value.describe()
        return text + " (capped)" if self.capped else text

    def __repr__(self):
        return "CappedProbability(%s)" % self.describe()


def single_step_failure(p, delta, n_in_labels, out_labels,
                        out_labels_prime, T):
    """Two chained failure-probability amplifications; returns
    (p', p'') as CappedProbability values, each capped at one."""
    p = _as_probability(p)
    if p.is_zero():
        raise ValueError("p must be positive")
    s = blowup_parameter(delta, n_in_labels, T)

    def step(prob, m):
        coeff = ExtendedLogReal.from_int(2 * delta * (s + m))
        bound = coeff.mul(prob.pow(Fraction(1, delta + 1)))
        value, capped = bound.capped_at_one()
        return CappedProbability(value, capped)

    p1 = step(p, out_labels)
    p2 = step(p1.value, out_labels_prime)
    return p1, p2


def multi_step_failure(p, j, delta, s, L):
    """(2*delta*(s+L))**2 * p**(1/(delta+1)**(2j)), capped at one."""
    p = _as_probability(p)
    if p.is_zero():
        raise ValueError("p must be positive")
    if j < 0:
        raise ValueError("j must be nonnegative")
    coeff = ExtendedLogReal.from_int((2 * delta * (s + L)) ** 2)
    bound = coeff.mul(p.pow(Fraction(1, (delta + 1) ** (2 * j))))
    value, capped = bound.capped_at_one()
    return CappedProbability(value, capped)


def pn_lower_failure(T, L, delta):
    """Failure probability floor after T rounds: log2 exactly
    -(delta**(16T)) * log2(L)."""
    if T < 1 or L < 2 or delta < 2:
        raise ValueError("T >= 1, L >= 2, delta >= 2 required")
    exponent = delta ** (16 * T)
    return ExtendedLogReal.from_log2(
        LogLin.log2_of_int(L).scale(-exponent))


def zero_round_failure_floor(L, delta):
    """Failure probability floor with no communication: 1 / L**(delta**2)."""
    if L < 2 or delta < 2:
        raise ValueError("L >= 2, delta >= 2 required")
    return ExtendedLogReal.from_log2(
        LogLin.log2_of_int(L).scale(-(delta ** 2)))


class BoundReport:
    """Exact evaluation of the two round lower-bound formulas."""

    __slots__ = ("k", "delta", "log2_L", "log2_n",
                 "deterministic_raw", "randomized_raw",
                 "deterministic_rounds", "randomized_rounds",
                 "deterministic_binding", "randomized_binding",
                 "thirteenth_variant")

    def as_dict(self):
        def fmt(entry):
            value, denom = entry
            r = value.ratio_to(denom)
            return {
                "exact_fraction": [r.numerator, r.denominator]
                                  if r is not None else None,
                "approx": value.to_float() / denom.to_float(),
            }
        out = {
            "k": self.k, "delta": self.delta,
            "deterministic": fmt(self.deterministic_raw),
            "randomized": fmt(self.randomized_raw),
            "deterministic_rounds": self.deterministic_rounds,
            "randomized_rounds": self.randomized_rounds,
            "deterministic_binding": self.deterministic_binding,
            "randomized_binding": self.randomized_binding,
        }
        if self.thirteenth_variant is not None:
            out["deterministic_thirteenth"] = fmt(self.thirteenth_variant)
        return out


def lower_bounds(k, delta, L, n, thirteenth_variant=False):
    """Evaluate min(k-1, (log_delta n - log_delta log L - 624)/16) and
    min(k-1, (log_delta log n - log_delta log L - 5)/16) exactly; inner
    logarithms base 2, outer base delta.

    L and n may be integers or power-tower strings like "2^3^85"; inner
    logarithms require the argument's log2 to be a positive integer when
    an exact answer is requested.
    """
    if k < 1 or delta < 2:
        raise ValueError("k >= 1, delta >= 2 required")
    log2_L = parse_quantity(L)
    log2_n = parse_quantity(n)
    log2_delta = LogLin.log2_of_int(delta)

    inner_L = _exact_inner_log(log2_L)
    if inner_L is None:
        raise CapExceeded(
            "log2 of L is not an exact integer; provide L as a power of two")
    inner_n = _exact_inner_log(log2_n)
    if inner_n is None:
        raise CapExceeded(
            "log2 of n is not an exact integer; provide n as a power of two")

    report = BoundReport()
    report.k = k
    report.delta = delta
    report.log2_L = log2_L
    report.log2_n = log2_n

    def build(outer_numerator, subtrahend_const):
        # raw = (outer_numerator - inner_L - const*log2 delta) / (16 log2 d)
        numerator = outer_numerator - inner_L \
            - log2_delta.scale(subtrahend_const)
        denom = log2_delta.scale(16)
        k_term = denom.scale(Fraction(k - 1))
        if numerator <= k_term:
            binding = "formula"
            value = numerator
        else:
            binding = "k-1"
            value = k_term
        # rounds: floor of value / denom
        ratio = value.ratio_to(denom)
        if ratio is not None:
            rounds = ratio.numerator // ratio.denominator
        else:
            rounds = _floor_ratio(value, denom)
        return (value, denom), rounds, binding

    report.deterministic_raw, report.deterministic_rounds, \
        report.deterministic_binding = build(log2_n, 624)
    report.randomized_raw, report.randomized_rounds, \
        report.randomized_binding = build(inner_n, 5)
    if thirteenth_variant:
        (value, denom), _, _ = build(log2_n, 624)
        report.thirteenth_variant = (value, denom.scale(Fraction(13, 16)))
    else:
        report.thirteenth_variant = None
    return report


def _floor_ratio(numerator, denominator):
    """floor(numerator / denominator) with denominator > 0, by validated
    interval refinement confirmed with exact comparisons."""
    prec = 128
    while prec <= 1 << 22:
        old_iv, old_mp = iv.prec, mp.prec
        iv.prec = prec
        mp.prec = prec
        try:
            box = numerator._interval(prec) / denominator._interval(prec)
            lo = int(mp.floor(mp.mpf(box.a)))
            hi = int(mp.floor(mp.mpf(box.b)))
        finally:
            iv.prec = old_iv
            mp.prec = old_mp
        if hi - lo <= 1:
            for cand in range(lo, hi + 1):
                if denominator.scale(cand) <= numerator \
                        and numerator < denominator.scale(cand + 1):
                    return cand
        prec *= 2
    raise CapExceeded("floor refinement exceeded precision cap")
