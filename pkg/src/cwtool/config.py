"""Caps and defaults shared by all modules."""

from dataclasses import dataclass


@dataclass
class Caps:
    brute_force: int = 1 << 16  # units / idempotents scans
    closure_maps: int = 1 << 20  # qmodule closure
    group_order: int = 10 ** 7
    enumeration: int = 1 << 28  # |R|^k for codeword streams
    dual_scan: int = 1 << 20  # |V|^N for exhaustive dual computation
    symbolic_points: int = 10 ** 6  # grid size for exact identity tests


DEFAULT_CAPS = Caps()
