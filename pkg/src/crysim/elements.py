"""Embedded element table: symbol, Z, and ground-state valence configuration.

The configuration strings list the subshells beyond the preceding noble-gas
core (NIST ground-state configurations, Aufbau exceptions included, e.g.
Cr 3d5 4s1 and Cu 3d10 4s1).  From each token like ``3d6`` we keep only the
subshell letter and occupancy -- the pair that indexes the orbital
dictionary used by the descriptors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import UnknownElementError

# symbol  Z  configuration beyond the noble-gas core
_TABLE = """
H   1   1s1
He  2   1s2
Li  3   2s1
Be  4   2s2
B   5   2s2 2p1
C   6   2s2 2p2
N   7   2s2 2p3
O   8   2s2 2p4
F   9   2s2 2p5
Ne  10  2s2 2p6
Na  11  3s1
Mg  12  3s2
Al  13  3s2 3p1
Si  14  3s2 3p2
P   15  3s2 3p3
S   16  3s2 3p4
Cl  17  3s2 3p5
Ar  18  3s2 3p6
K   19  4s1
Ca  20  4s2
Sc  21  3d1 4s2
Ti  22  3d2 4s2
V   23  3d3 4s2
Cr  24  3d5 4s1
Mn  25  3d5 4s2
Fe  26  3d6 4s2
Co  27  3d7 4s2
Ni  28  3d8 4s2
Cu  29  3d10 4s1
Zn  30  3d10 4s2
Ga  31  3d10 4s2 4p1
Ge  32  3d10 4s2 4p2
As  33  3d10 4s2 4p3
Se  34  3d10 4s2 4p4
Br  35  3d10 4s2 4p5
Kr  36  3d10 4s2 4p6
Rb  37  5s1
Sr  38  5s2
Y   39  4d1 5s2
Zr  40  4d2 5s2
Nb  41  4d4 5s1
Mo  42  4d5 5s1
Tc  43  4d5 5s2
Ru  44  4d7 5s1
Rh  45  4d8 5s1
Pd  46  4d10
Ag  47  4d10 5s1
Cd  48  4d10 5s2
In  49  4d10 5s2 5p1
Sn  50  4d10 5s2 5p2
Sb  51  4d10 5s2 5p3
Te  52  4d10 5s2 5p4
I   53  4d10 5s2 5p5
Xe  54  4d10 5s2 5p6
Cs  55  6s1
Ba  56  6s2
La  57  5d1 6s2
Ce  58  4f1 5d1 6s2
Pr  59  4f3 6s2
Nd  60  4f4 6s2
Pm  61  4f5 6s2
Sm  62  4f6 6s2
Eu  63  4f7 6s2
Gd  64  4f7 5d1 6s2
Tb  65  4f9 6s2
Dy  66  4f10 6s2
Ho  67  4f11 6s2
Er  68  4f12 6s2
Tm  69  4f13 6s2
Yb  70  4f14 6s2
Lu  71  4f14 5d1 6s2
Hf  72  4f14 5d2 6s2
Ta  73  4f14 5d3 6s2
W   74  4f14 5d4 6s2
Re  75  4f14 5d5 6s2
Os  76  4f14 5d6 6s2
Ir  77  4f14 5d7 6s2
Pt  78  4f14 5d9 6s1
Au  79  4f14 5d10 6s1
Hg  80  4f14 5d10 6s2
Tl  81  4f14 5d10 6s2 6p1
Pb  82  4f14 5d10 6s2 6p2
Bi  83  4f14 5d10 6s2 6p3
Po  84  4f14 5d10 6s2 6p4
At  85  4f14 5d10 6s2 6p5
Rn  86  4f14 5d10 6s2 6p6
Fr  87  7s1
Ra  88  7s2
Ac  89  6d1 7s2
Th  90  6d2 7s2
Pa  91  5f2 6d1 7s2
U   92  5f3 6d1 7s2
Np  93  5f4 6d1 7s2
Pu  94  5f6 7s2
Am  95  5f7 7s2
Cm  96  5f7 6d1 7s2
Bk  97  5f9 7s2
Cf  98  5f10 7s2
Es  99  5f11 7s2
Fm  100 5f12 7s2
Md  101 5f13 7s2
No  102 5f14 7s2
Lr  103 5f14 7s2 7p1
"""

_MAX_OCCUPANCY = {"s": 2, "p": 6, "d": 10, "f": 14}
_TOKEN_RE = re.compile(r"^[1-7]([spdf])(\d{1,2})$")


@dataclass(frozen=True)
class ElementInfo:
    symbol: str
    atomic_number: int
    configuration: str
    valence_labels: tuple[str, ...]  # e.g. ("d6", "s2"), members of the orbital dictionary


def _parse_labels(configuration: str) -> tuple[str, ...]:
    labels = []
    for token in configuration.split():
        m = _TOKEN_RE.match(token)
        if m is None:
            raise ValueError(f"bad configuration token {token!r}")
        shell, occ = m.group(1), int(m.group(2))
        if not 1 <= occ <= _MAX_OCCUPANCY[shell]:
            raise ValueError(f"occupancy out of range in {token!r}")
        labels.append(f"{shell}{occ}")
    return tuple(labels)


def _build_table() -> dict[str, ElementInfo]:
    table = {}
    for line in _TABLE.strip().splitlines():
        parts = line.split(None, 2)
        symbol, z, configuration = parts[0], int(parts[1]), parts[2]
        table[symbol] = ElementInfo(symbol, z, configuration, _parse_labels(configuration))
    return table


ELEMENT_TABLE: dict[str, ElementInfo] = _build_table()


def get_element(symbol: str) -> ElementInfo:
    """Look up an element by symbol; raises UnknownElementError otherwise."""
    try:
        return ELEMENT_TABLE[symbol]
    except KeyError:
        raise UnknownElementError(f"unknown element symbol {symbol!r}") from None


def atomic_number(symbol: str) -> int:
    return get_element(symbol).atomic_number
