"""Affine reduction from ``[a, b]`` bounds to the unit cube, and trine expansion."""

from __future__ import annotations

from .errors import ExpansionError, InfeasibleInstance, ParameterError


def normalize(a: float, b: float, n: int, M0: float):
    """Map an ``[a, b]``-bounded instance with mass ``M0`` onto ``[0, 1]^n``.

    Returns ``(M, forward, inverse)`` where ``forward`` sends a unit-cube
    coordinate to ``[a, b]`` and ``inverse`` undoes it. Substituting
    ``x' = a + (b - a) x`` into ``sum x' = M0`` gives ``M = (M0 - a n)/(b - a)``.
    """
    if not a < b:
        raise ParameterError(f"bounds must satisfy a < b, got a={a}, b={b}")
    lo, hi = a * n, b * n
    slack = 1e-12 * max(1.0, abs(lo), abs(hi))
    if not (lo - slack <= M0 <= hi + slack):
        raise InfeasibleInstance(f"M0 = {M0} outside [a*n, b*n] = [{lo}, {hi}]")
    width = b - a
    M = (M0 - a * n) / width
    # round-off at either end may land a hair outside [0, n]
    M = min(max(M, 0.0), float(n))

    def forward(x):
        return a + width * x

    def inverse(xp):
        return (xp - a) / width

    return M, forward, inverse


def expand(k, n: int) -> tuple[float, ...]:
    """Canonical trine vector: ``k0`` zeros, ``ky`` copies of ``y``, ``k1`` ones."""
    counts = []
    for name in ("k0", "k1", "ky"):
        v = getattr(k, name)
        if not float(v).is_integer():
            raise ExpansionError(f"{name} = {v!r} is not an integer count")
        if v < 0:
            raise ExpansionError(f"{name} = {v!r} is negative")
        counts.append(int(v))
    k0, k1, ky = counts
    if k0 + k1 + ky != n:
        raise ExpansionError(f"counts {counts} do not sum to n = {n}")
    if ky and k.y is None:
        raise ExpansionError("ky > 0 but no interior value y")
    inner = (float(k.y),) * ky if ky else ()
    return (0.0,) * k0 + inner + (1.0,) * k1


def antisym_complement(spec, x: float) -> float:
    """Reflection of ``x`` through the center of antisymmetry."""
    return 2.0 * spec.center - x

