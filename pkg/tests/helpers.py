"""Glue between the exact-rational reference and the engine's types."""

from morava.coeff import CoeffContext
from morava.series import ser_new


def oc_to_elem(ctx, oc):
    """Oracle coefficient {(uexp, vtuple): Fraction} -> CoeffElem, applying
    the context's v-degree truncation."""
    out = ctx.zero()
    for (ue, vt), q in oc.items():
        if sum(vt) > ctx.D:
            continue
        c = ctx.padic.from_fraction(q.numerator, q.denominator)
        out = ctx.add(out, ctx.from_scalar(c, ue, ctx.vcode(vt)))
    return out


def oc_series_to_yseries(ctx, ser, M=None):
    if M is None:
        M = len(ser) - 1
    f = ser_new(ctx, M)
    for d, oc in enumerate(ser[: M + 1]):
        f.c[d] = oc_to_elem(ctx, oc)
    return f
