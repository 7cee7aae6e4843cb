"""The four families built by connected sums, plus the chains they use."""
from __future__ import annotations

from functools import lru_cache

from .descriptor import power, replace_name
from .fixtures import golden
from .sums import connected_sum

FAMILIES = ("fg", "ftq", "xig", "xitq")
FAMILY_MIN = {"fg": 0, "ftq": 1, "xig": 1, "xitq": 1}


@lru_cache(maxsize=None)
def psi_g(g):
    """``psi_g = psi_{g-1} # psi_1`` along ``omega`` and ``alpha``."""
    if g < 1:
        raise ValueError("genus must be at least 1")
    if g == 1:
        return golden("psi1")
    return replace_name(connected_sum(psi_g(g - 1), "omega", golden("psi1"), "alpha"), f"psi{g}")


@lru_cache(maxsize=None)
def psitilde_q(q):
    if q < 1:
        raise ValueError("genus must be at least 1")
    if q == 1:
        return golden("psitilde1")
    return replace_name(connected_sum(psitilde_q(q - 1), "omega", golden("psitilde1"), "alpha"), f"psitilde{q}")


def f_g(g):
    if g == 0:
        return golden("psi0")
    return replace_name(connected_sum(golden("psi0"), "omega0", psi_g(g), "alpha"), f"f{g}")


def ftilde_q(q):
    return replace_name(connected_sum(golden("psi0"), "omega0", psitilde_q(q), "alpha"), f"ftilde{q}")


def xi_g(g):
    if g == 0:
        return golden("xi0")
    return replace_name(connected_sum(golden("xi0"), "omega0", power(psi_g(g), 2), "alpha"), f"xi{g}")


def xitilde_q(q):
    return replace_name(connected_sum(golden("xi0"), "omega0", power(psitilde_q(q), 2), "alpha"), f"xitilde{q}")


BUILDERS = {"fg": f_g, "ftq": ftilde_q, "xig": xi_g, "xitq": xitilde_q}


def build(family, n):
    if family not in BUILDERS:
        raise KeyError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if n < FAMILY_MIN[family]:
        raise ValueError(f"{family} is defined for n >= {FAMILY_MIN[family]}")
    return BUILDERS[family](n)
