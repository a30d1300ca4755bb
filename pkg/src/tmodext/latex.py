"""LaTeX rendering: theta, twists as superscripts ``^{(k)}``, tau powers, array matrices."""

from __future__ import annotations

from .field import THETA, RationalCoeff, mono_deg

TWIST_NOTE = "% (n) := q^n, i.e. x^{(n)} = x^{q^n}"


def _scalar(c, F):
    from .expr import _scalar_str

    return _scalar_str(c, F).replace("*", " ")


def _var(name, tw):
    base = r"\theta" if name == THETA else name
    return base if tw == 0 else f"{base}^{{({tw})}}"


def _mono(m):
    parts = []
    for (name, tw), e in m:
        v = _var(name, tw)
        if e != 1:
            v = f"{{{v}}}^{{{e}}}" if tw else f"{v}^{{{e}}}"
        parts.append(v)
    return " ".join(parts)


def _poly(p, F):
    if not p:
        return "0"
    terms = []
    for m in sorted(p, key=lambda m: (-mono_deg(m), m)):
        cs = _scalar(p[m], F)
        ms = _mono(m)
        if not ms:
            terms.append(cs)
        elif cs == "1":
            terms.append(ms)
        elif cs == "-1":
            terms.append("-" + ms)
        elif F.e > 1 and (" + " in cs or " - " in cs):
            terms.append(f"({cs}) {ms}")
        else:
            terms.append(f"{cs} {ms}")
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def coeff_latex(x):
    if not isinstance(x, RationalCoeff):
        x = x.to_rational()
    F = x.field
    num = _poly(x.num, F)
    if x.is_polynomial():
        return num
    neg = num.startswith("-") and len(x.num) == 1
    if neg:
        num = num[1:]
    frac = f"\\frac{{{num}}}{{{_poly(x.den, F)}}}"
    return "-" + frac if neg else frac


def skew_latex(f):
    if f.is_zero():
        return "0"
    g = r"\tau" if f.side.symbol == "T" else r"\sigma"
    terms = []
    for k, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        cs = coeff_latex(c)
        if k == 0:
            terms.append(cs)
            continue
        power = g if k == 1 else f"{g}^{{{k}}}"
        if cs == "1":
            terms.append(power)
        elif cs == "-1":
            terms.append("-" + power)
        elif " + " in cs or " - " in cs:
            terms.append(f"\\left({cs}\\right) {power}")
        else:
            terms.append(f"{cs} {power}")
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def matrix_latex(M, note=True):
    if M.rows == 0:
        body = r"\left(\right)"
    else:
        cols = "c" * M.cols
        rows = [" & ".join(skew_latex(e) for e in row) + r" \\" for row in M.entries]
        body = "\\left(\n\\begin{array}{" + cols + "}\n" + "\n".join(rows) + "\n\\end{array}\n\\right)"
    return body + ("\n" + TWIST_NOTE if note else "")
