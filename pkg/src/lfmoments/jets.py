"""Truncated multivariate power series ("jets") for symbolic residue work.

A jet lives in a :class:`JetRing` fixing the variable count, a weight for
each variable (1 for ordinary variables; power-sum rings weight the r-th
power sum by r), a total weighted-degree cap, and optional per-variable
exponent caps.  Coefficients are whatever arithmetic type the caller feeds
in (mpf/mpc for numeric work, ints or Fractions for exact work).

Storage is a dict keyed by the exponent multi-index packed into a single
integer, six bits per variable; multiplication adds keys directly, and any
product monomial exceeding the caps is dropped, so arithmetic never silently
exceeds the truncation order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

_FIELD_BITS = 6
_FIELD_MAX = (1 << _FIELD_BITS) - 1
_FIELD_MASK = _FIELD_MAX


class JetError(ValueError):
    pass


@dataclass
class JetRing:
    """Shape of a truncated polynomial ring; shared by all jets in it."""

    num_vars: int
    max_total_degree: int
    weights: tuple = ()
    var_caps: tuple = ()
    _deginfo: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.num_vars < 1:
            raise JetError("need at least one variable")
        if not self.weights:
            self.weights = (1,) * self.num_vars
        if not self.var_caps:
            self.var_caps = tuple(
                min(31, self.max_total_degree // w) for w in self.weights
            )
        if len(self.weights) != self.num_vars or len(self.var_caps) != self.num_vars:
            raise JetError("weights/var_caps length mismatch")
        if any(c > 31 for c in self.var_caps):
            raise JetError("per-variable caps above 31 overflow the key packing")

    # -- key handling -------------------------------------------------------

    def pack(self, exponents, strict: bool = True) -> int:
        if len(exponents) != self.num_vars:
            raise JetError("exponent tuple has wrong arity")
        key = 0
        for i, e in enumerate(exponents):
            if e < 0 or e > self.var_caps[i]:
                if strict:
                    raise JetError(f"exponent {e} outside cap for variable {i}")
                return -1
            key |= e << (_FIELD_BITS * i)
        return key

    def unpack(self, key: int) -> tuple:
        return tuple((key >> (_FIELD_BITS * i)) & _FIELD_MASK for i in range(self.num_vars))

    def degree_of(self, key: int) -> int:
        """Weighted degree of a packed key, or -1 if a per-variable cap is broken."""
        info = self._deginfo.get(key)
        if info is None:
            deg = 0
            for i in range(self.num_vars):
                e = (key >> (_FIELD_BITS * i)) & _FIELD_MASK
                if e > self.var_caps[i]:
                    deg = -1
                    break
                deg += e * self.weights[i]
            if deg > self.max_total_degree:
                deg = -1
            info = deg
            self._deginfo[key] = info
        return info

    # -- constructors ---------------------------------------------------------

    def zero(self) -> "Jet":
        return Jet(self, {})

    def const(self, c) -> "Jet":
        return Jet(self, {0: c}) if not _is_zero(c) else self.zero()

    def variable(self, i: int, coeff=1) -> "Jet":
        if self.weights[i] > self.max_total_degree:
            return self.zero()
        return Jet(self, {1 << (_FIELD_BITS * i): coeff})

    def monomial(self, exponents, coeff=1) -> "Jet":
        key = self.pack(exponents)
        if self.degree_of(key) < 0:
            return self.zero()
        return Jet(self, {key: coeff})

    def from_terms(self, terms) -> "Jet":
        """Build a jet, silently truncating monomials beyond the caps."""
        out = {}
        for exponents, coeff in terms:
            key = self.pack(exponents, strict=False)
            if key < 0 or self.degree_of(key) < 0:
                continue
            _accum(out, key, coeff)
        return Jet(self, out)

    def compatible(self, other: "JetRing") -> bool:
        return (
            self.num_vars == other.num_vars
            and self.max_total_degree == other.max_total_degree
            and self.weights == other.weights
            and self.var_caps == other.var_caps
        )


def _is_zero(c) -> bool:
    return c == 0


def _accum(table: dict, key: int, coeff):
    cur = table.get(key)
    if cur is None:
        table[key] = coeff
    else:
        cur = cur + coeff
        if _is_zero(cur):
            del table[key]
        else:
            table[key] = cur


class Jet:
    """One element of a :class:`JetRing`; immutable by convention."""

    __slots__ = ("ring", "terms", "_buckets")

    def __init__(self, ring: JetRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._buckets = None

    # -- inspection -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, exponents):
        """Stored coefficient of a monomial (0 if absent)."""
        return self.terms.get(self.ring.pack(exponents), 0)

    def constant_term(self):
        return self.terms.get(0, 0)

    def items(self):
        ring = self.ring
        for key, coeff in self.terms.items():
            yield ring.unpack(key), coeff

    def max_degree(self) -> int:
        ring = self.ring
        return max((ring.degree_of(k) for k in self.terms), default=0)

    def buckets(self):
        """Terms grouped by weighted degree; cached on the jet."""
        if self._buckets is None:
            by_deg: dict[int, list] = {}
            ring = self.ring
            for key, coeff in self.terms.items():
                by_deg.setdefault(ring.degree_of(key), []).append((key, coeff))
            self._buckets = sorted(by_deg.items())
        return self._buckets

    # -- ring operations --------------------------------------------------------

    def _check(self, other: "Jet"):
        if self.ring is not other.ring and not self.ring.compatible(other.ring):
            raise JetError("jets live in incompatible rings")

    def __add__(self, other):
        if not isinstance(other, Jet):
            return self + self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        for key, coeff in other.terms.items():
            _accum(out, key, coeff)
        return Jet(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ring, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return self + self.ring.const(-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + self.ring.const(other)

    def scale(self, c) -> "Jet":
        if _is_zero(c):
            return self.ring.zero()
        return Jet(self.ring, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        self._check(other)
        ring = self.ring
        cap = ring.max_total_degree
        degree_of = ring.degree_of
        out: dict = {}
        a, b = self, other
        if len(a.terms) < len(b.terms):
            a, b = b, a
        # iterate the smaller jet's buckets outermost so the degree cut prunes early
        for d2, terms2 in b.buckets():
            dmax = cap - d2
            for d1, terms1 in a.buckets():
                if d1 > dmax:
                    break
                for k1, c1 in terms1:
                    for k2, c2 in terms2:
                        k = k1 + k2
                        if degree_of(k) < 0:
                            continue
                        _accum(out, k, c1 * c2)
        return Jet(ring, out)

    __rmul__ = __mul__

    def truncate(self, max_total_degree: int) -> "Jet":
        """Drop every monomial of weighted degree above the new cap."""
        ring = self.ring
        out = {
            k: c for k, c in self.terms.items() if 0 <= ring.degree_of(k) <= max_total_degree
        }
        return Jet(ring, out)

    def map_coefficients(self, fn) -> "Jet":
        out = {}
        for k, c in self.terms.items():
            v = fn(c)
            if not _is_zero(v):
                out[k] = v
        return Jet(self.ring, out)

    # -- evaluation ----------------------------------------------------------

    def evaluate(self, point):
        """Value of the truncated polynomial at a concrete point."""
        if len(point) != self.ring.num_vars:
            raise JetError("point arity mismatch")
        ring = self.ring
        # per-variable power tables up to the observed exponents
        maxe = [0] * ring.num_vars
        for key in self.terms:
            for i in range(ring.num_vars):
                e = (key >> (_FIELD_BITS * i)) & _FIELD_MASK
                if e > maxe[i]:
                    maxe[i] = e
        powers = []
        for i, x in enumerate(point):
            row = [1]
            for _ in range(maxe[i]):
                row.append(row[-1] * x)
            powers.append(row)
        total = 0
        for key, coeff in self.terms.items():
            v = coeff
            for i in range(ring.num_vars):
                e = (key >> (_FIELD_BITS * i)) & _FIELD_MASK
                if e:
                    v = v * powers[i][e]
            total = total + v
        return total


# ---------------------------------------------------------------------------
# Series plumbing
# ---------------------------------------------------------------------------

def jet_arith(a: Jet, b: Jet, op: str) -> Jet:
    """Named-operation wrapper: 'add', 'mul', or 'scalar_mul' (b a constant jet)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "scalar_mul":
        if len(b.terms) > 1 or (b.terms and 0 not in b.terms):
            raise JetError("scalar_mul expects a constant jet")
        return a.scale(b.constant_term())
    raise JetError(f"unknown op {op!r}")


def linear_form(ring: JetRing, coeffs) -> Jet:
    """c_1 z_1 + ... + c_m z_m as a jet."""
    if len(coeffs) != ring.num_vars:
        raise JetError("linear form arity mismatch")
    return ring.from_terms(
        (tuple(1 if j == i else 0 for j in range(ring.num_vars)), c)
        for i, c in enumerate(coeffs)
        if not _is_zero(c)
    )


def substitute_linear(ring: JetRing, series1d, linform_coeffs) -> Jet:
    """Jet of ``f(c . z)`` where f is a one-variable Taylor series.

    ``series1d`` is the coefficient list [a_0, a_1, ...] of the analytic
    part.  A series with a pole must have the pole cleared by the caller
    first (pass it through the residue engine's pole-clearing step); poles
    cannot be represented here.
    """
    series1d = list(series1d)
    lin = linear_form(ring, linform_coeffs)
    return compose_series(series1d, lin)


def compose_series(series1d, inner: Jet) -> Jet:
    """sum_n a_n * inner^n for a jet with vanishing constant term."""
    ring = inner.ring
    if not _is_zero(inner.constant_term()):
        raise JetError("series composition requires zero constant term")
    out = ring.zero()
    power = ring.const(1)
    for n, a in enumerate(series1d):
        if n > ring.max_total_degree:
            break
        if n > 0:
            power = power * inner
            if not power:
                break
        if not _is_zero(a):
            out = out + power.scale(a)
    return out


def inverse(jet: Jet) -> Jet:
    """Multiplicative inverse of a jet with invertible constant term."""
    c0 = jet.constant_term()
    if _is_zero(c0):
        raise JetError("no inverse: constant term is zero")
    inv0 = 1 / c0
    rest = (jet - c0).scale(inv0)   # vanishing constant term
    geo = [(-1) ** n for n in range(jet.ring.max_total_degree + 1)]
    return compose_series(geo, rest).scale(inv0)


def extract_coefficient(jet: Jet, exponents):
    """Residue-engine accessor: the stored coefficient (0 when absent)."""
    return jet.coefficient(exponents)


def vandermonde_squared(ring: JetRing, var_indices, coeff_one=1) -> Jet:
    """Jet of prod_{i<j} (z_j - z_i)^2 over the listed variables."""
    out = ring.const(coeff_one)
    n = ring.num_vars
    for a in range(len(var_indices)):
        for b in range(a + 1, len(var_indices)):
            i, j = var_indices[a], var_indices[b]
            diff = ring.from_terms(
                [
                    (tuple(1 if t == j else 0 for t in range(n)), coeff_one),
                    (tuple(1 if t == i else 0 for t in range(n)), -coeff_one),
                ]
            )
            out = out * diff * diff
    return out
