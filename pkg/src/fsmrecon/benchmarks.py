"""Embedded KISS2 benchmark fixtures.

Size-faithful stand-ins for the classic sequential-benchmark shapes this
toolkit is exercised against: every fixture is deterministic and completely
specified after don't-care expansion.  ``lion`` and ``train4`` are stored in
Mealy form (edge outputs) to exercise conversion; the rest are already
Moore-annotated.
"""

from __future__ import annotations

_FIXTURES: dict[str, str] = {}


def names() -> list[str]:
    """Fixture names, alphabetical."""
    return sorted(_FIXTURES)


def load(name: str) -> str:
    """KISS2 text for ``name`` (see :func:`names`)."""
    try:
        return _FIXTURES[name]
    except KeyError:
        raise KeyError(f"unknown benchmark {name!r}; available: {', '.join(names())}") from None


# 4 states, 2 inputs, 1 output, Mealy-classified (st1 is entered with both
# output values), 10/16 transitions are self-loops.
_FIXTURES["lion"] = """\
.i 2
.o 1
.p 13
.s 4
.r st0
-0 st0 st0 0
11 st0 st0 0
01 st0 st1 0
00 st1 st0 0
01 st1 st1 1
11 st1 st1 1
10 st1 st2 1
00 st2 st1 1
1- st2 st2 1
01 st2 st3 1
10 st3 st2 1
0- st3 st3 1
11 st3 st3 1
.e
"""

# 4 states, 2 inputs, 1 output, Mealy-classified, 9/16 self-loops.
_FIXTURES["train4"] = """\
.i 2
.o 1
.p 12
.s 4
.r st0
00 st0 st0 0
-1 st0 st1 0
10 st0 st2 0
00 st1 st1 1
1- st1 st1 1
01 st1 st3 1
00 st2 st2 1
-1 st2 st2 1
10 st2 st3 1
00 st3 st0 1
01 st3 st1 1
1- st3 st3 1
.e
"""

# 7 states, 1 input, 2 outputs, Moore-annotated, strongly connected ring
# with same-output jump transitions (s1 <-> s5).
_FIXTURES["dk27"] = """\
.i 1
.o 2
.p 14
.s 7
.r s0
0 s0 s1 01
1 s0 s0 00
0 s1 s2 10
1 s1 s5 01
0 s2 s3 11
1 s2 s2 10
0 s3 s4 00
1 s3 s0 00
0 s4 s5 01
1 s4 s4 00
0 s5 s6 10
1 s5 s1 01
0 s6 s0 00
1 s6 s6 10
.e
"""

# 6 states, 2 inputs, 2 outputs, Moore-annotated, 12/24 self-loops; the
# output vectors 00 and 01 are each shared by two states.
_FIXTURES["bbtas"] = """\
.i 2
.o 2
.p 24
.s 6
.r s0
00 s0 s0 00
01 s0 s1 01
10 s0 s0 00
11 s0 s2 10
00 s1 s1 01
01 s1 s2 10
10 s1 s1 01
11 s1 s3 11
00 s2 s2 10
01 s2 s3 11
10 s2 s2 10
11 s2 s4 00
00 s3 s3 11
01 s3 s4 00
10 s3 s3 11
11 s3 s5 01
00 s4 s4 00
01 s4 s5 01
10 s4 s4 00
11 s4 s0 00
00 s5 s5 01
01 s5 s0 00
10 s5 s5 01
11 s5 s1 01
.e
"""

# 8 states, 1 input, 1 output: a 3-bit shift register (state value shifts the
# input bit in, output is the register's high bit), Moore-annotated.
_FIXTURES["shiftreg"] = "\n".join(
    [".i 1", ".o 1", ".p 16", ".s 8", ".r s0"]
    + [
        f"{x} s{s} s{((s << 1) | x) & 7} {(((s << 1) | x) & 7) >> 2}"
        for s in range(8)
        for x in (0, 1)
    ]
    + [".e", ""]
)

# 4 states, 3 inputs, 5 outputs, Moore-annotated, one distinct output vector
# per state, 20/32 self-loops.
_MC_OUTPUTS = ["00000", "00111", "11000", "10101"]
_MC_DELTA = [
    [0, 0, 1, 0, 2, 0, 0, 3],
    [1, 2, 1, 1, 1, 3, 1, 0],
    [2, 2, 3, 2, 0, 2, 2, 1],
    [3, 1, 3, 3, 3, 0, 2, 3],
]
_FIXTURES["mc"] = "\n".join(
    [".i 3", ".o 5", ".p 32", ".s 4", ".r s0"]
    + [
        f"{v:03b} s{s} s{_MC_DELTA[s][v]} {_MC_OUTPUTS[_MC_DELTA[s][v]]}"
        for s in range(4)
        for v in range(8)
    ]
    + [".e", ""]
)


# 10 states, 5 inputs, 6 outputs, Moore-annotated, one distinct output
# vector per state, 88/320 self-loops, strongly connected.
_OPUS_OUTPUTS = ['111101', '001011', '001100', '010011', '111000', '110000', '101110', '011010', '111100', '100101']
_OPUS_DELTA = [
    [2, 9, 7, 4, 3, 0, 1, 1, 2, 2, 0, 5, 8, 2, 4, 1, 0, 3, 0, 1, 0, 0, 0, 9, 0, 0, 1, 1, 0, 6, 6, 4],
    [3, 7, 7, 3, 1, 1, 1, 1, 9, 2, 1, 8, 6, 7, 2, 5, 0, 2, 1, 0, 5, 2, 1, 8, 8, 0, 1, 0, 5, 1, 4, 6],
    [7, 1, 4, 2, 3, 2, 4, 2, 4, 4, 5, 7, 2, 2, 2, 2, 7, 1, 6, 7, 9, 2, 2, 2, 2, 1, 2, 3, 1, 0, 9, 8],
    [5, 3, 3, 8, 3, 3, 4, 3, 8, 4, 7, 0, 8, 4, 6, 4, 2, 1, 3, 1, 4, 3, 5, 3, 7, 4, 4, 5, 8, 8, 1, 7],
    [8, 4, 2, 4, 9, 4, 8, 3, 2, 6, 5, 4, 8, 4, 3, 8, 4, 4, 4, 4, 6, 4, 4, 9, 5, 5, 4, 2, 1, 5, 0, 0],
    [5, 6, 0, 7, 7, 7, 6, 2, 8, 6, 5, 6, 8, 4, 9, 2, 2, 8, 5, 4, 5, 8, 1, 8, 0, 6, 6, 1, 9, 2, 2, 8],
    [3, 6, 9, 9, 9, 6, 5, 6, 6, 8, 3, 6, 1, 7, 0, 7, 6, 6, 6, 2, 3, 3, 2, 0, 3, 7, 7, 3, 5, 3, 3, 6],
    [5, 3, 3, 6, 7, 1, 7, 6, 5, 5, 4, 7, 7, 4, 3, 7, 4, 2, 4, 5, 6, 8, 8, 7, 9, 0, 8, 7, 6, 7, 7, 7],
    [0, 4, 0, 9, 8, 9, 8, 8, 8, 8, 0, 6, 7, 5, 8, 8, 2, 8, 1, 3, 5, 7, 5, 8, 2, 5, 9, 7, 6, 0, 8, 9],
    [6, 2, 7, 9, 1, 5, 7, 3, 4, 3, 2, 5, 5, 5, 8, 4, 1, 9, 0, 7, 4, 9, 0, 7, 6, 1, 5, 2, 2, 2, 5, 9],
]
_FIXTURES["opus"] = "\n".join(
    [".i 5", ".o 6", ".p 320", ".s 10", ".r s0"]
    + [
        f"{v:05b} s{s} s{_OPUS_DELTA[s][v]} {_OPUS_OUTPUTS[_OPUS_DELTA[s][v]]}"
        for s in range(10)
        for v in range(32)
    ]
    + [".e", ""]
)

# 13 states, 7 inputs, 7 outputs, Moore-annotated, one distinct output
# vector per state, 424/1664 self-loops, strongly connected.
_S386_OUTPUTS = ['1100000', '0010000', '1100110', '0011110', '1011111', '0111011', '0011001', '0000000', '1100001', '0001011', '0101100', '0010101', '1111010']
_S386_DELTA = [
    [9, 0, 2, 8, 6, 3, 1, 0, 0, 0, 12, 5, 7, 10, 9, 5, 6, 2, 11, 6, 1, 7, 0, 0, 10, 7, 0, 0, 9, 0, 4, 0, 4, 5, 0, 0, 0, 8, 10, 2, 0, 8, 7, 9, 12, 11, 12, 0, 5, 11, 9, 12, 6, 6, 0, 0, 9, 7, 6, 11, 0, 1, 9, 7, 0, 3, 7, 0, 11, 3, 0, 0, 1, 7, 10, 0, 7, 4, 2, 0, 0, 12, 9, 3, 3, 4, 0, 8, 1, 0, 12, 7, 0, 4, 0, 4, 0, 9, 1, 0, 0, 11, 10, 0, 12, 11, 7, 7, 11, 4, 12, 0, 11, 11, 3, 0, 0, 1, 10, 5, 10, 3, 8, 11, 5, 8, 2, 9],
    [7, 6, 10, 1, 8, 10, 1, 6, 7, 11, 3, 1, 7, 8, 11, 0, 6, 1, 4, 10, 10, 3, 0, 5, 1, 4, 2, 2, 2, 1, 1, 7, 1, 5, 1, 6, 0, 7, 12, 7, 2, 12, 1, 4, 0, 4, 1, 8, 1, 10, 7, 1, 9, 7, 1, 1, 4, 2, 2, 1, 0, 11, 1, 10, 1, 7, 2, 12, 1, 3, 0, 10, 10, 4, 0, 8, 5, 1, 1, 1, 10, 10, 2, 1, 3, 1, 12, 3, 1, 6, 5, 12, 5, 12, 1, 9, 1, 11, 1, 10, 1, 5, 8, 1, 8, 1, 6, 9, 6, 3, 1, 7, 3, 11, 1, 2, 1, 1, 8, 10, 1, 1, 1, 0, 10, 3, 10, 6],
    [2, 2, 3, 7, 2, 3, 2, 2, 7, 2, 7, 11, 6, 10, 2, 2, 8, 2, 9, 6, 7, 3, 11, 3, 5, 11, 2, 5, 4, 2, 6, 4, 2, 2, 11, 7, 0, 7, 2, 8, 0, 5, 11, 2, 1, 0, 4, 8, 9, 7, 3, 12, 2, 6, 8, 4, 3, 2, 3, 8, 7, 12, 5, 2, 0, 2, 9, 2, 0, 12, 2, 5, 2, 10, 7, 7, 4, 6, 9, 2, 6, 2, 3, 3, 4, 0, 2, 5, 5, 2, 10, 11, 5, 3, 5, 5, 2, 1, 10, 9, 12, 3, 2, 2, 2, 7, 4, 3, 4, 2, 5, 0, 5, 7, 2, 11, 2, 8, 10, 2, 12, 1, 8, 2, 12, 5, 0, 0],
    [2, 3, 3, 11, 3, 10, 3, 11, 1, 12, 3, 8, 2, 9, 3, 2, 4, 2, 7, 6, 3, 0, 8, 0, 0, 4, 1, 8, 10, 3, 8, 9, 3, 4, 7, 1, 12, 6, 12, 0, 2, 3, 3, 3, 6, 3, 5, 5, 10, 9, 0, 8, 3, 7, 1, 6, 10, 12, 12, 10, 10, 3, 9, 3, 10, 5, 3, 10, 2, 5, 3, 8, 1, 4, 6, 10, 11, 3, 10, 7, 4, 3, 6, 7, 2, 3, 7, 9, 7, 3, 6, 1, 3, 0, 12, 7, 11, 3, 3, 2, 3, 3, 3, 11, 7, 3, 4, 10, 3, 3, 7, 2, 0, 10, 3, 0, 10, 4, 10, 8, 1, 12, 4, 8, 5, 6, 5, 6],
    [4, 2, 0, 12, 11, 2, 4, 12, 7, 4, 12, 4, 4, 10, 7, 8, 5, 8, 10, 10, 2, 3, 1, 3, 9, 7, 8, 1, 0, 7, 4, 12, 4, 4, 9, 1, 6, 4, 4, 6, 7, 7, 2, 1, 1, 8, 1, 1, 4, 4, 4, 3, 9, 4, 6, 2, 3, 9, 2, 11, 0, 9, 6, 10, 0, 7, 11, 1, 6, 3, 4, 8, 5, 0, 12, 8, 1, 1, 4, 9, 11, 1, 8, 4, 4, 4, 6, 6, 10, 2, 5, 8, 2, 7, 2, 12, 0, 12, 7, 0, 4, 2, 9, 12, 3, 2, 4, 7, 0, 1, 12, 6, 4, 9, 7, 11, 2, 10, 0, 10, 3, 2, 5, 8, 11, 6, 4, 7],
    [12, 5, 6, 10, 7, 11, 4, 6, 1, 1, 2, 0, 2, 5, 10, 2, 11, 4, 5, 3, 7, 10, 7, 11, 4, 11, 12, 10, 11, 6, 0, 5, 3, 10, 11, 5, 4, 1, 4, 7, 11, 12, 9, 12, 7, 9, 3, 7, 2, 1, 11, 5, 1, 10, 9, 7, 2, 11, 5, 12, 3, 5, 5, 9, 12, 5, 2, 5, 0, 12, 5, 5, 4, 1, 7, 1, 10, 5, 4, 5, 1, 8, 5, 8, 7, 5, 12, 1, 11, 1, 1, 7, 7, 6, 8, 5, 7, 6, 4, 5, 9, 5, 9, 5, 5, 2, 6, 5, 5, 0, 5, 1, 9, 4, 1, 3, 2, 1, 1, 7, 11, 0, 4, 5, 2, 5, 4, 12],
    [12, 6, 7, 6, 6, 4, 2, 6, 0, 5, 9, 0, 6, 6, 1, 3, 9, 2, 11, 0, 7, 10, 11, 2, 8, 1, 6, 8, 7, 3, 6, 10, 6, 5, 6, 6, 6, 1, 6, 2, 8, 10, 10, 11, 6, 7, 5, 12, 6, 6, 12, 0, 9, 10, 8, 6, 2, 4, 6, 11, 10, 3, 6, 2, 6, 5, 2, 8, 6, 6, 6, 6, 10, 12, 1, 3, 6, 6, 8, 3, 4, 6, 9, 6, 3, 3, 5, 6, 6, 0, 6, 3, 7, 7, 2, 6, 4, 2, 10, 4, 12, 6, 0, 0, 5, 9, 6, 6, 3, 9, 6, 8, 6, 10, 2, 6, 12, 7, 6, 6, 4, 4, 10, 6, 6, 9, 4, 2],
    [7, 0, 4, 9, 6, 9, 8, 12, 7, 11, 5, 10, 6, 0, 4, 8, 6, 3, 6, 2, 4, 9, 6, 11, 7, 9, 8, 5, 5, 6, 9, 7, 10, 6, 0, 8, 7, 4, 3, 2, 4, 7, 10, 7, 7, 2, 2, 4, 7, 10, 8, 8, 7, 2, 8, 4, 1, 7, 3, 3, 7, 11, 3, 7, 10, 11, 7, 2, 2, 7, 11, 9, 7, 5, 2, 9, 9, 8, 0, 7, 2, 7, 10, 3, 10, 10, 8, 5, 7, 7, 8, 8, 7, 3, 7, 0, 5, 7, 9, 5, 5, 3, 7, 12, 7, 1, 7, 7, 4, 7, 3, 7, 11, 3, 3, 12, 11, 12, 5, 1, 7, 4, 2, 6, 2, 7, 8, 6],
    [6, 4, 7, 9, 4, 1, 4, 5, 12, 5, 10, 8, 0, 8, 7, 10, 3, 8, 2, 8, 1, 6, 9, 6, 1, 0, 8, 8, 12, 8, 9, 6, 10, 3, 1, 8, 1, 4, 1, 2, 8, 10, 11, 9, 8, 0, 5, 8, 10, 11, 0, 2, 0, 9, 6, 12, 12, 12, 12, 0, 9, 8, 8, 6, 3, 11, 12, 11, 9, 11, 10, 2, 0, 1, 1, 2, 8, 0, 8, 12, 3, 7, 9, 8, 3, 0, 7, 5, 5, 0, 7, 3, 9, 8, 6, 3, 5, 8, 8, 4, 11, 8, 10, 0, 5, 8, 11, 0, 5, 8, 9, 9, 8, 5, 12, 8, 4, 7, 6, 9, 6, 2, 3, 0, 4, 4, 0, 7],
    [9, 9, 0, 7, 9, 11, 8, 9, 2, 6, 2, 9, 12, 5, 6, 5, 12, 4, 12, 3, 4, 9, 10, 9, 4, 10, 2, 11, 9, 9, 12, 10, 2, 5, 6, 9, 4, 8, 8, 9, 8, 2, 9, 8, 6, 4, 9, 9, 6, 9, 2, 4, 12, 6, 10, 2, 4, 8, 12, 9, 8, 5, 9, 11, 11, 1, 9, 0, 2, 0, 0, 2, 5, 3, 9, 9, 8, 1, 12, 10, 4, 9, 0, 6, 6, 4, 12, 6, 5, 9, 9, 3, 3, 1, 9, 1, 7, 7, 11, 6, 7, 4, 9, 9, 10, 2, 9, 4, 6, 4, 12, 5, 8, 1, 9, 4, 10, 12, 3, 9, 9, 0, 9, 6, 9, 7, 4, 2],
    [11, 1, 0, 4, 8, 4, 11, 4, 7, 10, 3, 6, 0, 11, 10, 12, 4, 10, 11, 11, 10, 10, 10, 10, 2, 12, 10, 6, 7, 5, 7, 10, 8, 7, 8, 5, 6, 12, 2, 0, 8, 4, 5, 9, 0, 2, 6, 10, 6, 3, 4, 1, 2, 0, 10, 7, 11, 5, 11, 2, 1, 10, 11, 2, 6, 5, 3, 6, 8, 10, 1, 6, 10, 6, 0, 7, 10, 2, 7, 11, 1, 6, 10, 7, 11, 4, 4, 12, 5, 10, 3, 10, 0, 10, 11, 6, 2, 10, 10, 4, 0, 3, 0, 9, 8, 10, 10, 2, 10, 9, 6, 1, 1, 10, 7, 9, 10, 4, 10, 7, 6, 10, 8, 10, 0, 1, 12, 4],
    [4, 10, 5, 0, 1, 11, 11, 2, 12, 6, 3, 6, 9, 7, 3, 12, 10, 5, 11, 8, 3, 11, 12, 11, 2, 7, 11, 7, 10, 7, 3, 11, 6, 3, 8, 4, 11, 11, 11, 11, 7, 9, 1, 2, 11, 6, 11, 9, 5, 11, 11, 3, 9, 11, 11, 11, 11, 11, 5, 11, 9, 11, 6, 8, 8, 10, 10, 11, 11, 3, 10, 7, 3, 0, 10, 9, 2, 8, 11, 6, 8, 11, 11, 11, 5, 11, 9, 1, 11, 8, 12, 11, 10, 6, 7, 7, 12, 0, 6, 12, 5, 11, 11, 6, 3, 9, 3, 7, 10, 11, 11, 11, 1, 10, 4, 11, 2, 1, 1, 11, 11, 2, 2, 11, 2, 0, 8, 3],
    [12, 3, 7, 12, 9, 0, 10, 9, 11, 1, 8, 12, 3, 12, 12, 4, 0, 9, 11, 12, 1, 9, 0, 9, 1, 5, 3, 5, 4, 0, 11, 0, 5, 4, 7, 9, 0, 12, 5, 12, 6, 12, 3, 11, 2, 1, 12, 5, 10, 12, 12, 3, 12, 5, 7, 12, 11, 11, 5, 12, 2, 12, 12, 12, 6, 12, 8, 9, 12, 0, 3, 1, 5, 5, 10, 7, 9, 1, 12, 11, 9, 11, 12, 9, 2, 12, 11, 3, 1, 12, 2, 8, 5, 12, 5, 12, 12, 0, 12, 12, 3, 0, 12, 1, 2, 0, 12, 0, 5, 1, 6, 7, 7, 11, 9, 2, 9, 12, 12, 11, 12, 9, 12, 5, 8, 6, 11, 0],
]
_FIXTURES["s386"] = "\n".join(
    [".i 7", ".o 7", ".p 1664", ".s 13", ".r s0"]
    + [
        f"{v:07b} s{s} s{_S386_DELTA[s][v]} {_S386_OUTPUTS[_S386_DELTA[s][v]]}"
        for s in range(13)
        for v in range(128)
    ]
    + [".e", ""]
)
