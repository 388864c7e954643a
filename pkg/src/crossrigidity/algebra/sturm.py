"""Exact real-root counting by Sturm sequences."""

from __future__ import annotations

from .poly import ExactPoly, as_fraction, squarefree_part


def sturm_sequence(p: ExactPoly) -> list[ExactPoly]:
    """Sturm chain of the squarefree part of ``p``."""
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    f = squarefree_part(p) if not p.is_constant() else ExactPoly.constant(1)
    seq = [f, f.derivative()]
    if seq[-1].is_zero():
        return seq[:1]
    while True:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            return seq
        seq.append(r)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(signs) -> int:
    prev, count = 0, 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def sign_variations(seq: list[ExactPoly], x) -> int:
    """Sign changes of the chain at ``x``; ``x`` may be ``±inf`` as a float."""
    if x == float("inf"):
        return _variations(_sign(f.lc) for f in seq)
    if x == float("-inf"):
        return _variations(_sign(f.lc) * (-1) ** f.degree for f in seq)
    return _variations(_sign(f(x)) for f in seq)


def count_real_roots_in(p: ExactPoly, lo, hi, *, open: bool = False) -> int:
    """Number of distinct real roots of ``p`` in ``[lo, hi]`` (or ``(lo, hi)``).

    ``lo``/``hi`` are exact rationals, or ``±inf`` floats for unbounded ends.
    Endpoint roots are detected by exact evaluation, not by the chain.
    """
    if p.is_zero():
        raise ValueError("root count of the zero polynomial")
    if not _is_inf(lo):
        lo = as_fraction(lo)
    if not _is_inf(hi):
        hi = as_fraction(hi)
    if not lo < hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    if p.is_constant():
        return 0
    seq = sturm_sequence(p)
    f = seq[0]
    # V(lo) - V(hi) counts roots in the half-open interval (lo, hi].
    n = sign_variations(seq, lo) - sign_variations(seq, hi)
    hi_root = not _is_inf(hi) and f(hi) == 0
    lo_root = not _is_inf(lo) and f(lo) == 0
    if open:
        return n - hi_root
    return n + lo_root


def count_real_roots(p: ExactPoly) -> int:
    """Number of distinct real roots of ``p``."""
    return count_real_roots_in(p, float("-inf"), float("inf"))


def _is_inf(v) -> bool:
    return isinstance(v, float) and v in (float("inf"), float("-inf"))

