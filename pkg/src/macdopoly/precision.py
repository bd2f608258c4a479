"""Precision contexts and parameter points.

Every numeric routine in this package takes an explicit PrecisionContext;
nothing reads or mutates the global mpmath precision outside a ``workdps``
block.  Params carries the weight parameters (alpha, nu, lambda, t) with the
domain guards that every identity check relies on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from contextlib import contextmanager

import mpmath as mp

__all__ = [
    "PrecisionContext",
    "Params",
    "DomainError",
    "EscalationError",
    "working_precision",
]


class DomainError(ValueError):
    """A parameter or argument is outside the admissible domain."""


class EscalationError(ArithmeticError):
    """Precision escalation hit its cap without reaching the target tolerance."""

    def __init__(self, message, last_value=None, previous_value=None):
        super().__init__(message)
        self.last_value = last_value
        self.previous_value = previous_value


# Extra bits of headroom used inside workdps blocks so that results are good
# to the full requested digit count.
GUARD_DIGITS = 10


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (decimal digits), target tolerance, escalation cap.

    Invariants: digits >= 30 and tol >= 10^-(digits-10); escalation doubles
    digits and never exceeds max_digits.
    """

    digits: int = 120
    tol: float = 1e-60
    max_digits: int = 240

    def __post_init__(self):
        if self.digits < 30:
            raise DomainError(f"digits must be >= 30, got {self.digits}")
        if self.tol <= 0:
            raise DomainError("tol must be positive")
        if mp.mpf(self.tol) < mp.mpf(10) ** (-(self.digits - 10)):
            raise DomainError(
                f"tol={self.tol} demands more than {self.digits} digits deliver"
            )
        if self.max_digits < self.digits:
            raise DomainError("max_digits must be >= digits")

    def escalated(self) -> "PrecisionContext":
        """Context with doubled working precision (capped at max_digits)."""
        new_digits = min(2 * self.digits, self.max_digits)
        if new_digits == self.digits:
            raise EscalationError(
                f"cannot escalate beyond max_digits={self.max_digits}"
            )
        return PrecisionContext(new_digits, self.tol, self.max_digits)

    @property
    def can_escalate(self) -> bool:
        return self.digits < self.max_digits

    def tol_mp(self) -> mp.mpf:
        return mp.mpf(self.tol)


@contextmanager
def working_precision(ctx: PrecisionContext, extra: int = GUARD_DIGITS):
    """mpmath working-precision block for the given context."""
    with mp.workdps(ctx.digits + extra):
        yield


def _to_mpf(v) -> mp.mpf:
    # Strings and integers convert exactly; floats are taken at face value.
    return mp.mpf(v)


@dataclass(frozen=True)
class Params:
    """Weight parameters (alpha, nu, lambda, t) for x^alpha e^(-lambda x) rho_nu(x t).

    Domain: alpha > -1, nu >= 0, lambda >= 0, t >= 0, lambda^2 + t^2 != 0.
    t = 0 additionally requires nu > 0 (the kernel limit is Gamma(nu)).
    """

    alpha: mp.mpf
    nu: mp.mpf
    lam: mp.mpf
    t: mp.mpf

    def __init__(self, alpha, nu, lam, t):
        object.__setattr__(self, "alpha", _to_mpf(alpha))
        object.__setattr__(self, "nu", _to_mpf(nu))
        object.__setattr__(self, "lam", _to_mpf(lam))
        object.__setattr__(self, "t", _to_mpf(t))
        self._validate()

    def _validate(self):
        if not self.alpha > -1:
            raise DomainError(f"alpha must be > -1, got {self.alpha}")
        if self.nu < 0:
            raise DomainError(f"nu must be >= 0, got {self.nu}")
        if self.lam < 0:
            raise DomainError(f"lambda must be >= 0, got {self.lam}")
        if self.t < 0:
            raise DomainError(f"t must be >= 0, got {self.t}")
        if self.lam == 0 and self.t == 0:
            raise DomainError("lambda and t cannot both be zero")
        if self.t == 0 and self.nu == 0:
            raise DomainError("t = 0 requires nu > 0 (kernel limit Gamma(nu))")

    def replace(self, **kw) -> "Params":
        vals = {"alpha": self.alpha, "nu": self.nu, "lam": self.lam, "t": self.t}
        vals.update(kw)
        return Params(**vals)

    def key(self) -> tuple:
        """Hashable exact key (used for table caches).

        Uses the raw mpf representation: finite-difference shifts of size
        10^-40 must map to distinct keys.
        """
        return (self.alpha._mpf_, self.nu._mpf_, self.lam._mpf_, self.t._mpf_)

    def __repr__(self):
        return (
            f"Params(alpha={mp.nstr(self.alpha, 8)}, nu={mp.nstr(self.nu, 8)}, "
            f"lam={mp.nstr(self.lam, 8)}, t={mp.nstr(self.t, 8)})"
        )
