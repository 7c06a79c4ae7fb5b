"""Line-oriented text format for structures, lattices and finite algebras.

Three headers are recognised::

    AKS nT nP     POLE, PUSH, APP, QP blocks and K, S lines
    RL nT nP      POLE and PUSH blocks only
    OCA n         LEQ, APP, IMP, PHI blocks and K, S, optional E lines

``POLE`` and ``LEQ`` list related pairs, one per line. ``PUSH``, ``APP`` and
``IMP`` list complete tables as ``x y result`` triples. ``QP`` and ``PHI``
list element indices, any number per line. ``#`` starts a comment.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .aks import AbstractKrivineStructure, saturate, validate_aks
from .errors import AxiomViolationError, InstanceFormatError, OcaStructureError
from .oca import FiniteOca
from .polarity import Carrier, RealizabilityLattice, iter_bits

Instance = AbstractKrivineStructure | RealizabilityLattice | FiniteOca

_BLOCKS = {
    "AKS": ("POLE", "PUSH", "APP", "QP"),
    "RL": ("POLE", "PUSH"),
    "OCA": ("LEQ", "APP", "IMP", "PHI"),
}
_SCALARS = {"AKS": ("K", "S"), "RL": (), "OCA": ("K", "S", "E")}
_ARITY = {"POLE": 2, "LEQ": 2, "PUSH": 3, "APP": 3, "IMP": 3, "QP": None, "PHI": None}


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    column: int

    def int(self, bound: int, what: str) -> int:
        try:
            v = int(self.text)
        except ValueError:
            raise InstanceFormatError(f"expected an integer for {what}, got {self.text!r}", self.line, self.column) from None
        if not 0 <= v < bound:
            raise InstanceFormatError(f"{what} {v} is out of range [0, {bound})", self.line, self.column)
        return v


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = []
        col = 0
        for word in body.split():
            col = body.index(word, col)
            toks.append(_Token(word, no, col + 1))
            col += len(word)
        if toks:
            yield no, toks


def parse_instance(text: str, saturate_on_load: bool = False) -> Instance:
    """Parse text into a structure, lattice or algebra and validate it.

    Structures violating the axioms raise :class:`AxiomViolationError`
    unless ``saturate_on_load`` is set, in which case the pole is saturated.
    """
    lines = list(_lines(text))
    if not lines:
        raise InstanceFormatError("empty instance", 1, 1)
    _, head = lines[0]
    kind = head[0].text
    if kind not in _BLOCKS:
        raise InstanceFormatError(f"unknown header {kind!r}; expected AKS, RL or OCA", head[0].line, head[0].column)
    want = 1 if kind == "OCA" else 2
    if len(head) != 1 + want:
        raise InstanceFormatError(f"header {kind} takes {want} size(s)", head[0].line, head[0].column)
    sizes = []
    for tok in head[1:]:
        v = tok.int(1 << 16, "size")
        if v < 1:
            raise InstanceFormatError("sizes must be positive", tok.line, tok.column)
        sizes.append(v)
    blocks: dict[str, list[list[_Token]]] = {}
    scalars: dict[str, _Token] = {}
    current = None
    for _, toks in lines[1:]:
        word = toks[0].text
        if word in _BLOCKS[kind] and len(toks) == 1:
            if word in blocks:
                raise InstanceFormatError(f"duplicate {word} block", toks[0].line, toks[0].column)
            blocks[word] = []
            current = word
        elif word in _SCALARS[kind]:
            if len(toks) != 2:
                raise InstanceFormatError(f"{word} takes exactly one value", toks[0].line, toks[0].column)
            if word in scalars:
                raise InstanceFormatError(f"duplicate {word} line", toks[0].line, toks[0].column)
            scalars[word] = toks[1]
            current = None
        elif current is None:
            raise InstanceFormatError(f"unexpected {word!r} outside a block", toks[0].line, toks[0].column)
        else:
            arity = _ARITY[current]
            if arity is not None and len(toks) != arity:
                raise InstanceFormatError(f"{current} rows have {arity} entries, got {len(toks)}",
                                          toks[0].line, toks[0].column)
            blocks[current].append(toks)
    last = lines[-1][1][-1]
    for name in _BLOCKS[kind]:
        if name not in blocks:
            raise InstanceFormatError(f"missing {name} block", last.line, last.column)
    for name in _SCALARS[kind]:
        if name != "E" and name not in scalars:
            raise InstanceFormatError(f"missing {name} line", last.line, last.column)
    if kind == "OCA":
        return _build_oca(sizes[0], blocks, scalars, head[0])
    return _build_aks(kind, sizes, blocks, scalars, head[0], saturate_on_load)


def _relation(rows, shape, names) -> np.ndarray:
    out = np.zeros(shape, dtype=bool)
    for row in rows:
        i, j = (tok.int(n, what) for tok, n, what in zip(row, shape, names))
        out[i, j] = True
    return out


def _table(rows, shape, bound: int, block: str, names, anchor: _Token) -> np.ndarray:
    out = np.full(shape, -1, dtype=np.int64)
    for row in rows:
        i, j = (tok.int(n, what) for tok, n, what in zip(row[:2], shape, names))
        if out[i, j] >= 0:
            raise InstanceFormatError(f"duplicate {block} entry for ({i}, {j})", row[0].line, row[0].column)
        out[i, j] = row[2].int(bound, f"{block} result")
    if np.any(out < 0):
        i, j = (int(x) for x in np.argwhere(out < 0)[0])
        raise InstanceFormatError(f"{block} table has {int((out < 0).sum())} missing entries, first ({i}, {j})",
                                  anchor.line, anchor.column)
    return out


def _members(rows, bound: int, what: str) -> int:
    mask = 0
    for row in rows:
        for tok in row:
            mask |= 1 << tok.int(bound, what)
    return mask


def _build_aks(kind, sizes, blocks, scalars, anchor, saturate_on_load):
    nt, ns = sizes
    pole = _relation(blocks["POLE"], (nt, ns), ("term", "stack"))
    push = _table(blocks["PUSH"], (nt, ns), ns, "PUSH", ("term", "stack"), anchor)
    rl = RealizabilityLattice(Carrier("terms", nt), Carrier("stacks", ns), pole, push)
    if kind == "RL":
        return rl
    app = _table(blocks["APP"], (nt, nt), nt, "APP", ("term", "term"), anchor)
    qp = _members(blocks["QP"], nt, "quasi-proof")
    K = scalars["K"].int(nt, "K")
    S = scalars["S"].int(nt, "S")
    k = AbstractKrivineStructure(rl, app, qp, K, S)
    if saturate_on_load:
        return saturate(k)
    rep = validate_aks(k)
    if not rep.passed:
        raise AxiomViolationError(f"{rep.violations} axiom violation(s); first: {rep.witnesses[0]}")
    return k


def _build_oca(n, blocks, scalars, anchor):
    leq = _relation(blocks["LEQ"], (n, n), ("element", "element"))
    app = _table(blocks["APP"], (n, n), n, "APP", ("element", "element"), anchor)
    imp = _table(blocks["IMP"], (n, n), n, "IMP", ("element", "element"), anchor)
    phi = _members(blocks["PHI"], n, "filter element")
    e = scalars["E"].int(n, "E") if "E" in scalars else None
    try:
        return FiniteOca(Carrier("elements", n), leq, app, imp, scalars["K"].int(n, "K"), scalars["S"].int(n, "S"),
                         e, phi)
    except OcaStructureError as exc:
        raise InstanceFormatError(str(exc), anchor.line, anchor.column) from None


def _table_lines(table) -> list[str]:
    return [f"{i} {j} {int(v)}" for (i, j), v in np.ndenumerate(table)]


def _pairs(rel) -> list[str]:
    return [f"{i} {j}" for i, j in np.argwhere(rel)]


def serialize_instance(obj: Instance) -> str:
    """Canonical text: pairs and table rows in lexicographic order, member lists sorted."""
    if isinstance(obj, FiniteOca):
        out = [f"OCA {obj.n}", "LEQ", *_pairs(obj.leq), "APP", *_table_lines(obj.app),
               "IMP", *_table_lines(obj.imp), f"K {obj.k}", f"S {obj.s}"]
        if obj.e is not None:
            out.append(f"E {obj.e}")
        out += ["PHI", " ".join(str(x) for x in iter_bits(obj.filter))]
        return "\n".join(line for line in out if line) + "\n"
    rl = obj.rl if isinstance(obj, AbstractKrivineStructure) else obj
    header = "AKS" if isinstance(obj, AbstractKrivineStructure) else "RL"
    out = [f"{header} {rl.terms.size} {rl.stacks.size}", "POLE", *_pairs(rl.pole), "PUSH", *_table_lines(rl.push)]
    if isinstance(obj, AbstractKrivineStructure):
        out += ["APP", *_table_lines(obj.app), "QP", " ".join(str(x) for x in iter_bits(obj.qp)),
                f"K {obj.K}", f"S {obj.S}"]
    return "\n".join(line for line in out if line) + "\n"


def load_instance(path: str | Path, saturate_on_load: bool = False) -> Instance:
    return parse_instance(Path(path).read_text(), saturate_on_load)


def save_instance(obj: Instance, path: str | Path) -> None:
    Path(path).write_text(serialize_instance(obj))
