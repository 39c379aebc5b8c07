"""Level-of-detail operations: R x S block compression of a full grid and
context-preserving row/column expansion."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import GridAssignment, InvalidInputError


@dataclass(frozen=True)
class CompressedGrid:
    source: GridAssignment
    mask_rows: int  # R
    mask_cols: int  # S
    rows: int  # ceil(source rows / R)
    cols: int  # ceil(source cols / S)
    representatives: dict  # (I, J) -> id
    members: dict  # (I, J) -> {(i, j): id} block of the source grid

    def to_dict(self):
        return {
            "rows": self.rows,
            "cols": self.cols,
            "R": self.mask_rows,
            "S": self.mask_cols,
            "cells": [
                {
                    "I": I,
                    "J": J,
                    "rep": self.representatives[(I, J)],
                    "members": [
                        {"id": inst, "row": i, "col": j}
                        for (i, j), inst in sorted(block.items())
                    ],
                }
                for (I, J), block in sorted(self.members.items())
            ],
        }


def compress(g: GridAssignment, mask_rows: int, mask_cols: int) -> CompressedGrid:
    """Merge each R x S block of the source grid into one coarse cell.

    Boundary blocks may be smaller than the mask (ceiling division), so no
    instance is ever dropped. The representative of a block is the member
    whose source cell is nearest the block's geometric center, ties broken
    by row-major order.
    """
    if mask_rows < 1 or mask_cols < 1:
        raise InvalidInputError("mask dimensions must be >= 1")
    r, s = g.spec.rows, g.spec.cols
    coarse_rows = math.ceil(r / mask_rows)
    coarse_cols = math.ceil(s / mask_cols)
    members = {}
    for (i, j), inst in g.cells.items():
        members.setdefault((i // mask_rows, j // mask_cols), {})[(i, j)] = inst
    reps = {}
    for (bi, bj), block in members.items():
        i_lo = bi * mask_rows
        j_lo = bj * mask_cols
        i_hi = min(i_lo + mask_rows, r)
        j_hi = min(j_lo + mask_cols, s)
        center = ((i_lo + i_hi - 1) / 2.0, (j_lo + j_hi - 1) / 2.0)
        best = min(
            block,
            key=lambda cell: ((cell[0] - center[0]) ** 2 + (cell[1] - center[1]) ** 2,
                              cell),
        )
        reps[(bi, bj)] = block[best]
    return CompressedGrid(g, mask_rows, mask_cols, coarse_rows, coarse_cols,
                          reps, members)


def flatten(c: CompressedGrid) -> GridAssignment:
    """Union of all member blocks; reproduces the source assignment exactly."""
    cells = {}
    for block in c.members.values():
        cells.update(block)
    return GridAssignment(c.source.spec, cells)


def expand_context(c: CompressedGrid, coarse_cell) -> dict:
    """Expansion plan for a selected coarse cell: full member blocks for its
    entire coarse row and coarse column, everything else left compressed.

    Selecting an empty coarse cell returns a no-op plan.
    """
    bi, bj = coarse_cell
    if not (0 <= bi < c.rows and 0 <= bj < c.cols):
        raise InvalidInputError(
            f"coarse cell ({bi}, {bj}) outside {c.rows}x{c.cols} grid"
        )
    if (bi, bj) not in c.members:
        return {"selected": [bi, bj], "noop": True, "expanded": {}, "compressed": {}}
    expanded = {}
    compressed = {}
    for (I, J), block in c.members.items():
        if I == bi or J == bj:
            expanded[(I, J)] = dict(block)
        else:
            compressed[(I, J)] = c.representatives[(I, J)]
    return {
        "selected": [bi, bj],
        "noop": False,
        "expanded": expanded,
        "compressed": compressed,
    }


def expansion_plan_dict(plan) -> dict:
    """JSON-ready form of an expansion plan."""
    return {
        "selected": plan["selected"],
        "noop": plan["noop"],
        "expanded": [
            {
                "I": I,
                "J": J,
                "members": [
                    {"id": inst, "row": i, "col": j}
                    for (i, j), inst in sorted(block.items())
                ],
            }
            for (I, J), block in sorted(plan["expanded"].items())
        ],
        "compressed": [
            {"I": I, "J": J, "rep": rep}
            for (I, J), rep in sorted(plan["compressed"].items())
        ],
    }
