"""Working-precision contexts for all big-float computations.

Every arbitrary-precision operation in this package is parameterized by a
:class:`PrecisionContext` carrying the mantissa width and the derived decimal
targets.  The context also owns per-precision caches (Stieltjes constants,
Bernoulli numbers, prime-zeta derivative tables) that are filled lazily and
shared between threads; concurrent fills of the same entry are idempotent so a
plain lock suffices.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

import mpmath
from mpmath import mp

# bits per decimal digit, rounded up a little so the invariant below is safe
_BITS_PER_DIGIT = 3.3219280948873626

DEFAULT_TARGET_DIGITS = 40
DEFAULT_GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionContext:
    """Carrier of mantissa bits and derived tolerances.

    Invariants:
      * ``mantissa_bits >= ceil(3.33 * (target_digits + guard_digits))``
      * operations documented against a context aim at relative error below
        ``10**-target_digits``; the guard digits absorb rounding noise.
    """

    target_digits: int = DEFAULT_TARGET_DIGITS
    guard_digits: int = DEFAULT_GUARD_DIGITS
    mantissa_bits: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, repr=False)
    _caches: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be positive")
        if self.guard_digits < 0:
            raise ValueError("guard_digits must be non-negative")
        need = math.ceil(_BITS_PER_DIGIT * (self.target_digits + self.guard_digits)) + 4
        if self.mantissa_bits == 0:
            object.__setattr__(self, "mantissa_bits", need)
        elif self.mantissa_bits < need:
            raise ValueError(
                f"mantissa_bits={self.mantissa_bits} below requirement {need} "
                f"for {self.target_digits}+{self.guard_digits} digits"
            )

    # -- working precision -------------------------------------------------

    @property
    def dps(self) -> int:
        """Decimal working precision (target plus guard digits)."""
        return self.target_digits + self.guard_digits

    @property
    def eps(self):
        """Target relative tolerance 10**-target_digits as an mpf."""
        with self.workprec():
            return mp.mpf(10) ** (-self.target_digits)

    def tol(self, digits_off: int = 0):
        """10**(-target_digits + digits_off) as an mpf."""
        with self.workprec():
            return mp.mpf(10) ** (-self.target_digits + digits_off)

    def workprec(self):
        """Context manager installing this precision into mpmath."""
        return mp.workprec(self.mantissa_bits)

    def mpf(self, x) -> mpmath.mpf:
        with self.workprec():
            return mp.mpf(x)

    def mpc(self, re, im=0) -> mpmath.mpc:
        with self.workprec():
            return mp.mpc(re, im)

    # -- shared caches ------------------------------------------------------

    def cached(self, name: str, key, fill):
        """Fetch ``(name, key)`` from the context cache, computing on miss.

        ``fill`` runs outside the lock; duplicate concurrent fills write the
        same value, so last-writer-wins is harmless.
        """
        table = self._caches.setdefault(name, {})
        try:
            return table[key]
        except KeyError:
            pass
        value = fill()
        with self._lock:
            table[key] = value
        return value


def ctx_for(target_digits: int, guard_digits: int = DEFAULT_GUARD_DIGITS) -> PrecisionContext:
    return PrecisionContext(target_digits=target_digits, guard_digits=guard_digits)


DEFAULT_CTX = PrecisionContext()
