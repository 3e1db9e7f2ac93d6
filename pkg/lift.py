import itertools
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import pandas as pd

from annulus import BraidWord, hecke_closure, planar_closure_value
from qtorus import QTElement, QuantumTorus
from reporting import VerificationReport, build_report, merge_reports
from scalars import Scalar, framing_monomial, unknot_value
from symfun import SCHUR, SymSeries, SymTensor, coproduct

logger = logging.getLogger(__name__)

CHART_KINDS = ('planar', 'annular', 'torus')
SHEETS = (1, 2)
OVER, UNDER = 'over', 'under'

# Direction of a braid strand inside a crossing, in full turns from vertical.
RIGHTWARD = Fraction(-1, 8)
LEFTWARD = Fraction(1, 8)
CLOSURE_TURN = {'planar': Fraction(1), 'annular': Fraction(0)}


class DiagramFormatError(ValueError):
    """Malformed chart or diagram text."""


class NonGenericDiagramError(ValueError):
    """Event collision or inconsistent closure combinatorics."""


class EvaluationError(ValueError):
    """A lift lies outside the fragment a target can evaluate."""


def _fraction(text: str, what: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DiagramFormatError(f"Bad {what} {text!r}") from exc


def _integer(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise DiagramFormatError(f"Bad {what} {text!r}") from exc


def _sign(text: str) -> int:
    signs = {'+': 1, '+1': 1, '1': 1, '-': -1, '-1': -1}
    if text not in signs:
        raise DiagramFormatError(f"Bad sign {text!r}; use + or -")
    return signs[text]


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield lineno, line.split()


# ---------------------------------------------------------------------- charts
@dataclass(frozen=True)
class Wall:
    id: str
    source: int
    target: int
    turn: Fraction = Fraction(0)
    cls: Tuple[int, int] = (0, 0)


@dataclass
class CoverChart:
    """Double-cover data over the leaf space: walls, branch cuts, sign lines and face offsets."""
    kind: str = 'planar'
    walls: Dict[str, Wall] = field(default_factory=dict)
    cuts: Set[str] = field(default_factory=set)
    sign_lines: Set[str] = field(default_factory=set)
    faces: Dict[Tuple[str, int], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in CHART_KINDS:
            raise DiagramFormatError(f"Unsupported chart kind: {self.kind}. Choose from {list(CHART_KINDS)}")

    @property
    def trivial(self) -> bool:
        return self.kind != 'torus' and not self.walls and not self.cuts

    @classmethod
    def trivial_chart(cls, kind: str = 'planar') -> 'CoverChart':
        return cls(kind)

    def face_offset(self, face: Optional[str], sheet: int) -> Fraction:
        if face is None:
            return Fraction(0)
        return self.faces.get((face, sheet), Fraction(0))

    @classmethod
    def parse(cls, text: str) -> 'CoverChart':
        kind = None
        walls: Dict[str, Wall] = {}
        cuts: Set[str] = set()
        lines: Set[str] = set()
        faces: Dict[Tuple[str, int], Fraction] = {}
        for lineno, tokens in _content_lines(text):
            head = tokens[0]
            try:
                if head == 'chart':
                    kind = tokens[1]
                elif head == 'wall':
                    # wall <id> <src> <dst> turn <r> class <i> <j>
                    if len(tokens) != 9 or tokens[4] != 'turn' or tokens[6] != 'class':
                        raise DiagramFormatError("expected: wall <id> <src> <dst> turn <r> class <i> <j>")
                    src, dst = _integer(tokens[2], 'sheet'), _integer(tokens[3], 'sheet')
                    if {src, dst} != set(SHEETS):
                        raise DiagramFormatError(f"wall {tokens[1]} must join sheets 1 and 2")
                    walls[tokens[1]] = Wall(tokens[1], src, dst, _fraction(tokens[5], 'turn'),
                                            (_integer(tokens[7], 'class'), _integer(tokens[8], 'class')))
                elif head == 'cut':
                    cuts.add(tokens[1])
                elif head == 'signline':
                    lines.add(tokens[1])
                elif head == 'face':
                    sheet = _integer(tokens[2], 'sheet')
                    if sheet not in SHEETS:
                        raise DiagramFormatError(f"face sheet must be 1 or 2, got {sheet}")
                    faces[(tokens[1], sheet)] = _fraction(tokens[3], 'face offset')
                else:
                    raise DiagramFormatError(f"unknown keyword {head!r}")
            except IndexError as exc:
                raise DiagramFormatError(f"line {lineno}: too few fields") from exc
            except DiagramFormatError as exc:
                raise DiagramFormatError(f"line {lineno}: {exc}") from exc
        if kind is None:
            raise DiagramFormatError("chart file must declare 'chart <kind>'")
        return cls(kind, walls, cuts, lines, faces)

    @classmethod
    def load(cls, path) -> 'CoverChart':
        try:
            return cls.parse(Path(path).read_text())
        except DiagramFormatError as exc:
            logger.error("Invalid chart %s: %s", path, exc)
            raise

    def to_text(self) -> str:
        lines = [f"chart {self.kind}"]
        for w in self.walls.values():
            lines.append(f"wall {w.id} {w.source} {w.target} turn {w.turn} class {w.cls[0]} {w.cls[1]}")
        lines.extend(f"cut {c}" for c in sorted(self.cuts))
        lines.extend(f"signline {l}" for l in sorted(self.sign_lines))
        lines.extend(f"face {f} {sheet} {r}" for (f, sheet), r in sorted(self.faces.items()))
        return '\n'.join(lines) + '\n'


# ---------------------------------------------------------------------- diagrams
@dataclass(frozen=True)
class Port:
    """An arc end: a crossing strand (``over``/``under`` at crossing ``ref``) or a terminal ``in``/``out``."""
    kind: str
    ref: str

    @property
    def terminal(self) -> bool:
        return self.kind in ('in', 'out')

    @classmethod
    def parse(cls, text: str) -> 'Port':
        left, sep, right = text.partition(':')
        if not sep or not left or not right:
            raise DiagramFormatError(f"Bad port {text!r}; use <crossing>:over|under or in:<k>|out:<k>")
        if left in ('in', 'out'):
            _integer(right, 'terminal index')
            return cls(left, right)
        if right not in (OVER, UNDER):
            raise DiagramFormatError(f"Bad crossing role {right!r} in {text!r}")
        return cls(right, left)

    def render(self) -> str:
        return f"{self.kind}:{self.ref}" if self.terminal else f"{self.ref}:{self.kind}"


@dataclass(frozen=True)
class Segment:
    turn: Fraction = Fraction(0)
    cls: Tuple[int, int] = (0, 0)
    face: Optional[str] = None


@dataclass(frozen=True)
class WallEvent:
    wall: str
    direction: int


@dataclass(frozen=True)
class CutEvent:
    cut: str


@dataclass(frozen=True)
class SignEvent:
    line: str


@dataclass(frozen=True)
class TwistEvent:
    sign: int


Event = Union[WallEvent, CutEvent, SignEvent, TwistEvent]


@dataclass
class Arc:
    """Oriented arc from ``tail`` to ``head``; loops have neither. Events separate the segments."""
    id: str
    tail: Optional[Port] = None
    head: Optional[Port] = None
    segments: List[Segment] = field(default_factory=lambda: [Segment()])
    events: List[Event] = field(default_factory=list)

    def __post_init__(self):
        if len(self.segments) != len(self.events) + 1:
            raise NonGenericDiagramError(f"Arc {self.id}: {len(self.events)} events need "
                                         f"{len(self.events) + 1} segments")

    @property
    def is_loop(self) -> bool:
        return self.tail is None and self.head is None

    @property
    def turn(self) -> Fraction:
        return sum((seg.turn for seg in self.segments), Fraction(0))

    def copy(self) -> 'Arc':
        return Arc(self.id, self.tail, self.head, list(self.segments), list(self.events))


@dataclass(frozen=True)
class Crossing:
    id: str
    sign: int
    level: Optional[int] = None
    position: Optional[int] = None


@dataclass(frozen=True)
class BraidLayout:
    """Braid metadata kept by ``from_braid``: strand count and the arc at each bottom position."""
    strands: int
    bottom_arcs: Tuple[str, ...]


def _join_segments(first: Segment, second: Segment, corner: Fraction = Fraction(0)) -> Segment:
    return Segment(first.turn + corner + second.turn,
                   (first.cls[0] + second.cls[0], first.cls[1] + second.cls[1]),
                   first.face if first.face is not None else second.face)


class LeafDiagram:
    """Link diagram in the leaf space: crossings, arcs between them, and events along arcs."""

    def __init__(self, crossings: Mapping[str, Crossing], arcs: Mapping[str, Arc],
                 braid: Optional[BraidLayout] = None):
        self.crossings: Dict[str, Crossing] = dict(crossings)
        self.arcs: Dict[str, Arc] = dict(arcs)
        self.braid = braid
        self.validate()

    # -------------------------------------------------------------- structure
    def validate(self) -> None:
        heads: Dict[Port, str] = {}
        tails: Dict[Port, str] = {}
        for arc in self.arcs.values():
            if (arc.tail is None) != (arc.head is None):
                raise NonGenericDiagramError(f"Arc {arc.id} has only one end")
            for port, table, end in ((arc.tail, tails, 'tail'), (arc.head, heads, 'head')):
                if port is None:
                    continue
                if port.terminal:
                    expected = 'in' if end == 'tail' else 'out'
                    if port.kind != expected:
                        raise DiagramFormatError(f"Arc {arc.id}: {port.render()} cannot be a {end}")
                elif port.ref not in self.crossings:
                    raise DiagramFormatError(f"Arc {arc.id} refers to unknown crossing {port.ref}")
                if port in table:
                    raise NonGenericDiagramError(f"{port.render()} used twice ({table[port]} and {arc.id})")
                table[port] = arc.id
        for cid, crossing in self.crossings.items():
            if crossing.sign not in (1, -1):
                raise DiagramFormatError(f"Crossing {cid} has sign {crossing.sign}")
            for role in (OVER, UNDER):
                if Port(role, cid) not in heads or Port(role, cid) not in tails:
                    raise NonGenericDiagramError(f"Inconsistent closure at crossing {cid} ({role} strand)")
        ins = sorted(p.ref for p in tails if p.kind == 'in')
        outs = sorted(p.ref for p in heads if p.kind == 'out')
        if ins != outs:
            raise NonGenericDiagramError(f"Terminals do not match: in {ins}, out {outs}")
        self._heads, self._tails = heads, tails

    def roles(self, cid: str) -> Dict[str, str]:
        """Arc ids at crossing ``cid``: oi/oo (over in/out), ui/uo (under in/out)."""
        return {
            'oi': self._heads[Port(OVER, cid)], 'oo': self._tails[Port(OVER, cid)],
            'ui': self._heads[Port(UNDER, cid)], 'uo': self._tails[Port(UNDER, cid)],
        }

    def arc_from(self, port: Port) -> str:
        return self._tails[port]

    def terminals(self) -> List[str]:
        return sorted((p.ref for p in self._tails if p.kind == 'in'), key=int)

    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings.values())

    def copy(self) -> 'LeafDiagram':
        return LeafDiagram(self.crossings, {k: a.copy() for k, a in self.arcs.items()}, self.braid)

    # -------------------------------------------------------------- moves
    def switch(self, cid: str) -> 'LeafDiagram':
        """Exchange over and under at one crossing (the sign flips)."""
        crossing = self.crossings[cid]
        flip = {OVER: UNDER, UNDER: OVER}
        arcs = {}
        for aid, arc in self.arcs.items():
            arc = arc.copy()
            if arc.tail is not None and arc.tail.ref == cid and not arc.tail.terminal:
                arc.tail = Port(flip[arc.tail.kind], cid)
            if arc.head is not None and arc.head.ref == cid and not arc.head.terminal:
                arc.head = Port(flip[arc.head.kind], cid)
            arcs[aid] = arc
        crossings = dict(self.crossings)
        crossings[cid] = replace(crossing, sign=-crossing.sign)
        return LeafDiagram(crossings, arcs, self.braid)

    def smooth(self, cid: str) -> 'LeafDiagram':
        """Oriented smoothing: over-in joins under-out (corner +ε/4), under-in joins over-out (-ε/4)."""
        eps = self.crossings[cid].sign
        arcs = {k: a.copy() for k, a in self.arcs.items()}
        for head_role, tail_role, corner in ((OVER, UNDER, Fraction(eps, 4)), (UNDER, OVER, Fraction(-eps, 4))):
            h = next(a for a in arcs.values() if a.head == Port(head_role, cid))
            t = next(a for a in arcs.values() if a.tail == Port(tail_role, cid))
            if h.id == t.id:
                # first and last segments of a loop are the same physical piece
                last = h.segments[-1]
                arcs[h.id] = Arc(h.id, None, None, h.segments[:-1] + [replace(last, turn=last.turn + corner)],
                                 list(h.events))
                continue
            merged = Arc(h.id, h.tail, t.head,
                         h.segments[:-1] + [_join_segments(h.segments[-1], t.segments[0], corner)] + t.segments[1:],
                         h.events + t.events)
            del arcs[t.id]
            arcs[h.id] = merged
        crossings = {k: c for k, c in self.crossings.items() if k != cid}
        return LeafDiagram(crossings, arcs, None)

    def insert_kink(self, aid: str, sign: int = 1) -> 'LeafDiagram':
        """Add a curl at the end of an arc; the strand meets the new crossing over first."""
        arc = self.arcs[aid]
        if arc.is_loop:
            raise NonGenericDiagramError(f"Cannot insert a kink into loop {aid}; cut it at a crossing first")
        cid = self._fresh('k', self.crossings)
        arcs = {k: a.copy() for k, a in self.arcs.items()}
        loop_id = self._fresh('e', arcs)
        arcs[loop_id] = Arc(loop_id, Port(OVER, cid), Port(UNDER, cid), [Segment(Fraction(-3, 4))])
        rest_id = self._fresh('e', arcs)
        arcs[rest_id] = Arc(rest_id, Port(UNDER, cid), arc.head, [Segment(Fraction(-1, 4))])
        arcs[aid] = Arc(aid, arc.tail, Port(OVER, cid), list(arc.segments), list(arc.events))
        crossings = dict(self.crossings)
        crossings[cid] = Crossing(cid, 1)
        diagram = LeafDiagram(crossings, arcs, None)
        return diagram if sign == 1 else diagram.switch(cid)

    def insert_twists(self, aid: str, sign: int, count: int = 2) -> 'LeafDiagram':
        """Append ``count`` framing half twists of the given sign to an arc."""
        arcs = {k: a.copy() for k, a in self.arcs.items()}
        arc = arcs[aid]
        for _ in range(count):
            arc.events.append(TwistEvent(sign))
            arc.segments.append(Segment())
        return LeafDiagram(self.crossings, arcs, self.braid)

    @staticmethod
    def _fresh(prefix: str, taken) -> str:
        k = 0
        while f"{prefix}{k}" in taken:
            k += 1
        return f"{prefix}{k}"

    # -------------------------------------------------------------- constructors
    @classmethod
    def empty(cls) -> 'LeafDiagram':
        return cls({}, {})

    @classmethod
    def unknot(cls, turn: Fraction = Fraction(1)) -> 'LeafDiagram':
        return cls({}, {'u0': Arc('u0', segments=[Segment(Fraction(turn))])})

    @classmethod
    def strand(cls) -> 'LeafDiagram':
        return cls({}, {'e0': Arc('e0', Port('in', '0'), Port('out', '0'))})

    @classmethod
    def kink(cls, sign: int = 1) -> 'LeafDiagram':
        return cls.strand().insert_kink('e0', sign)

    @classmethod
    def from_braid(cls, braid: BraidWord, closure: str = 'annular') -> 'LeafDiagram':
        """Closure of a braid drawn bottom to top; σ_k has the rightward strand over when positive."""
        if closure not in CLOSURE_TURN:
            raise ValueError(f"Unsupported closure: {closure}. Choose from {list(CLOSURE_TURN)}")
        n = braid.strands
        crossings: Dict[str, Crossing] = {}
        arcs: Dict[str, Arc] = {}
        # per position: (tail port or None for the bottom piece, tail angle)
        pending: List[Tuple[Optional[Port], Fraction]] = [(None, Fraction(0)) for _ in range(n)]
        bottom_heads: Dict[int, Tuple[Port, Fraction]] = {}
        counter = itertools.count()

        def finish(p: int, head: Port, angle: Fraction) -> None:
            tail, tail_angle = pending[p]
            if tail is None:
                bottom_heads[p] = (head, angle)
                return
            aid = f"e{next(counter)}"
            arcs[aid] = Arc(aid, tail, head, [Segment(angle - tail_angle)])

        for level, g in enumerate(braid.word):
            k = abs(g) - 1
            cid = f"c{level}"
            crossings[cid] = Crossing(cid, 1 if g > 0 else -1, level, k)
            right_mover, left_mover = (OVER, UNDER) if g > 0 else (UNDER, OVER)
            finish(k, Port(right_mover, cid), RIGHTWARD)
            finish(k + 1, Port(left_mover, cid), LEFTWARD)
            pending[k] = (Port(left_mover, cid), LEFTWARD)
            pending[k + 1] = (Port(right_mover, cid), RIGHTWARD)

        bottom: List[str] = []
        for p in range(n):
            tail, tail_angle = pending[p]
            aid = f"e{next(counter)}"
            if tail is None:
                arcs[aid] = Arc(aid, segments=[Segment(CLOSURE_TURN[closure])])
            else:
                head, head_angle = bottom_heads[p]
                arcs[aid] = Arc(aid, tail, head, [Segment(head_angle - tail_angle + CLOSURE_TURN[closure])])
            bottom.append(aid)
        layout = BraidLayout(n, tuple(bottom)) if closure == 'annular' else None
        return cls(crossings, arcs, layout)

    # -------------------------------------------------------------- text format
    @classmethod
    def parse(cls, text: str) -> 'LeafDiagram':
        crossings: Dict[str, Crossing] = {}
        ends: Dict[str, Tuple[Optional[Port], Optional[Port]]] = {}
        items: Dict[str, List[Union[Segment, Event]]] = {}
        layout = None
        for lineno, tokens in _content_lines(text):
            head = tokens[0]
            try:
                if head == 'crossing':
                    extra = dict(zip(tokens[3::2], tokens[4::2]))
                    crossings[tokens[1]] = Crossing(
                        tokens[1], _sign(tokens[2]),
                        _integer(extra['level'], 'level') if 'level' in extra else None,
                        _integer(extra['position'], 'position') if 'position' in extra else None)
                elif head == 'arc':
                    ends[tokens[1]] = (Port.parse(tokens[2]), Port.parse(tokens[3]))
                    items.setdefault(tokens[1], [])
                elif head == 'loop':
                    ends[tokens[1]] = (None, None)
                    items.setdefault(tokens[1], [])
                elif head == 'seg':
                    extra = tokens[2:]
                    turn, cls_, face = Fraction(0), (0, 0), None
                    k = 0
                    while k < len(extra):
                        if extra[k] == 'turn':
                            turn = _fraction(extra[k + 1], 'turn')
                            k += 2
                        elif extra[k] == 'class':
                            cls_ = (_integer(extra[k + 1], 'class'), _integer(extra[k + 2], 'class'))
                            k += 3
                        elif extra[k] == 'face':
                            face = extra[k + 1]
                            k += 2
                        else:
                            raise DiagramFormatError(f"unknown segment field {extra[k]!r}")
                    items.setdefault(tokens[1], []).append(Segment(turn, cls_, face))
                elif head == 'wall':
                    items.setdefault(tokens[1], []).append(WallEvent(tokens[2], _sign(tokens[3])))
                elif head == 'cut':
                    items.setdefault(tokens[1], []).append(CutEvent(tokens[2]))
                elif head == 'sign':
                    items.setdefault(tokens[1], []).append(SignEvent(tokens[2]))
                elif head == 'twist':
                    items.setdefault(tokens[1], []).append(TwistEvent(_sign(tokens[2])))
                elif head == 'braid':
                    if tokens[2] != 'bottom':
                        raise DiagramFormatError("expected: braid <n> bottom <arc ids>")
                    layout = BraidLayout(_integer(tokens[1], 'strand count'), tuple(tokens[3:]))
                else:
                    raise DiagramFormatError(f"unknown keyword {head!r}")
            except (IndexError, KeyError) as exc:
                raise DiagramFormatError(f"line {lineno}: too few fields") from exc
            except DiagramFormatError as exc:
                raise DiagramFormatError(f"line {lineno}: {exc}") from exc
        unknown = set(items) - set(ends)
        if unknown:
            raise DiagramFormatError(f"Segments or events on undeclared arcs {sorted(unknown)}")
        arcs = {aid: cls._build_arc(aid, ends[aid], items[aid]) for aid in ends}
        return cls(crossings, arcs, layout)

    @staticmethod
    def _build_arc(aid: str, ends, items) -> Arc:
        segments: List[Segment] = []
        events: List[Event] = []
        expect_segment = True
        for item in items:
            if isinstance(item, Segment):
                if not expect_segment:
                    raise DiagramFormatError(f"Arc {aid}: two segments without an event between them")
                segments.append(item)
                expect_segment = False
                continue
            if expect_segment:
                if events:
                    raise NonGenericDiagramError(f"Arc {aid}: events collide (no segment between them)")
                segments.append(Segment())
            events.append(item)
            expect_segment = True
        if expect_segment:
            segments.append(Segment())
        return Arc(aid, ends[0], ends[1], segments, events)

    @classmethod
    def load(cls, path) -> 'LeafDiagram':
        try:
            return cls.parse(Path(path).read_text())
        except (DiagramFormatError, NonGenericDiagramError) as exc:
            logger.error("Invalid diagram %s: %s", path, exc)
            raise

    def to_text(self) -> str:
        lines = []
        for c in self.crossings.values():
            sign = '+' if c.sign > 0 else '-'
            meta = f" level {c.level} position {c.position}" if c.level is not None else ''
            lines.append(f"crossing {c.id} {sign}{meta}")
        for arc in self.arcs.values():
            lines.append(f"loop {arc.id}" if arc.is_loop else f"arc {arc.id} {arc.tail.render()} {arc.head.render()}")
            for k, seg in enumerate(arc.segments):
                text = f"seg {arc.id} turn {seg.turn}"
                if seg.cls != (0, 0):
                    text += f" class {seg.cls[0]} {seg.cls[1]}"
                if seg.face is not None:
                    text += f" face {seg.face}"
                lines.append(text)
                if k < len(arc.events):
                    lines.append(_render_event(arc.id, arc.events[k]))
        if self.braid is not None:
            lines.append(f"braid {self.braid.strands} bottom {' '.join(self.braid.bottom_arcs)}")
        return '\n'.join(lines) + '\n'


def _render_event(aid: str, event: Event) -> str:
    if isinstance(event, WallEvent):
        return f"wall {aid} {event.wall} {event.direction:+d}"
    if isinstance(event, CutEvent):
        return f"cut {aid} {event.cut}"
    if isinstance(event, SignEvent):
        return f"sign {aid} {event.line}"
    return f"twist {aid} {event.sign:+d}"


# ---------------------------------------------------------------------- lifts
@dataclass(frozen=True)
class ArcLift:
    sheets: Tuple[int, ...]
    detours: Tuple[int, ...] = ()


@dataclass
class LiftTerm:
    """One lifted diagram: per-arc sheets, crossing types, detours and its weight."""
    sheets: Dict[str, Tuple[int, ...]]
    crossing_types: Dict[str, str]
    detours: Tuple[Tuple[str, int], ...]
    weight: Scalar
    twists: Dict[int, Fraction] = field(default_factory=dict)
    signs: int = 0

    def describe(self) -> str:
        parts = [f"{aid}:{''.join(map(str, sh))}" for aid, sh in self.sheets.items()]
        return ' '.join(parts) or '(empty)'


@dataclass
class LiftSum:
    diagram: LeafDiagram
    chart: CoverChart
    terms: List[LiftTerm]

    def __len__(self) -> int:
        return len(self.terms)

    def table(self) -> pd.DataFrame:
        rows = [{
            'sheets': t.describe(),
            'exchanges': ','.join(c for c, kind in sorted(t.crossing_types.items()) if kind == 'exchange'),
            'detours': ','.join(f"{aid}@{k}" for aid, k in t.detours),
            'weight': str(t.weight),
        } for t in self.terms]
        return pd.DataFrame(rows, columns=['sheets', 'exchanges', 'detours', 'weight'])


def classify_crossing(oi: int, oo: int, ui: int, uo: int) -> Optional[str]:
    """Kept on one sheet, direct lift (crossing vanishes), exchange, or not a lift (None)."""
    if oi == oo == ui == uo:
        return 'kept'
    if oi == oo and ui == uo:
        return 'direct'
    if oi == uo == 1 and ui == oo == 2:
        return 'exchange'
    return None


class LiftEngine:
    """Enumerates the lifts of a leaf diagram to the double cover described by a chart."""

    def __init__(self, chart: Optional[CoverChart] = None):
        self.chart = chart or CoverChart.trivial_chart()

    def _check_events(self, diagram: LeafDiagram) -> None:
        for arc in diagram.arcs.values():
            for event in arc.events:
                if isinstance(event, WallEvent) and event.wall not in self.chart.walls:
                    raise DiagramFormatError(f"Arc {arc.id} crosses unknown wall {event.wall}")
                if isinstance(event, CutEvent) and event.cut not in self.chart.cuts:
                    raise DiagramFormatError(f"Arc {arc.id} crosses unknown cut {event.cut}")
                if isinstance(event, SignEvent) and event.line not in self.chart.sign_lines:
                    raise DiagramFormatError(f"Arc {arc.id} crosses unknown sign line {event.line}")

    def arc_options(self, arc: Arc) -> List[ArcLift]:
        out: List[ArcLift] = []

        def walk(k: int, sheets: List[int], detours: List[int]) -> None:
            if k == len(arc.events):
                if arc.is_loop and sheets[0] != sheets[-1]:
                    return
                out.append(ArcLift(tuple(sheets), tuple(detours)))
                return
            event, current = arc.events[k], sheets[-1]
            if isinstance(event, CutEvent):
                walk(k + 1, sheets + [3 - current], detours)
                return
            walk(k + 1, sheets + [current], detours)
            if isinstance(event, WallEvent) and current == self.chart.walls[event.wall].source:
                walk(k + 1, sheets + [self.chart.walls[event.wall].target], detours + [k])

        for start in SHEETS:
            walk(0, [start], [])
        return out

    def enumerate_lifts(self, diagram: LeafDiagram) -> LiftSum:
        self._check_events(diagram)
        arc_ids = list(diagram.arcs)
        options = {aid: self.arc_options(diagram.arcs[aid]) for aid in arc_ids}
        index = {aid: k for k, aid in enumerate(arc_ids)}
        roles = {cid: diagram.roles(cid) for cid in diagram.crossings}
        ready: Dict[int, List[str]] = {}
        for cid, r in roles.items():
            ready.setdefault(max(index[a] for a in r.values()), []).append(cid)

        terms: List[LiftTerm] = []
        chosen: Dict[str, ArcLift] = {}
        types: Dict[str, str] = {}

        def extend(k: int) -> None:
            if k == len(arc_ids):
                terms.append(self._make_term(diagram, chosen, types))
                return
            aid = arc_ids[k]
            for option in options[aid]:
                chosen[aid] = option
                ok = True
                for cid in ready.get(k, []):
                    r = roles[cid]
                    kind = classify_crossing(chosen[r['oi']].sheets[-1], chosen[r['oo']].sheets[0],
                                             chosen[r['ui']].sheets[-1], chosen[r['uo']].sheets[0])
                    if kind is None:
                        ok = False
                        break
                    types[cid] = kind
                if ok:
                    extend(k + 1)
                for cid in ready.get(k, []):
                    types.pop(cid, None)
            chosen.pop(aid, None)

        extend(0)
        logger.debug("Diagram with %d arcs and %d crossings has %d lifts",
                     len(arc_ids), len(diagram.crossings), len(terms))
        return LiftSum(diagram, self.chart, terms)

    def _make_term(self, diagram: LeafDiagram, chosen: Mapping[str, ArcLift], types: Mapping[str, str]) -> LiftTerm:
        turning = {1: Fraction(0), 2: Fraction(0)}
        faces = Fraction(0)
        twists = {1: Fraction(0), 2: Fraction(0)}
        weight = Scalar.one()
        signs = 0
        detours: List[Tuple[str, int]] = []
        trivial = self.chart.trivial
        for aid, arc in diagram.arcs.items():
            sheets = chosen[aid].sheets
            for seg, sheet in zip(arc.segments, sheets):
                turning[sheet] += seg.turn
                faces += (1 if sheet == 1 else -1) * self.chart.face_offset(seg.face, sheet)
            for k, event in enumerate(arc.events):
                if isinstance(event, TwistEvent):
                    half = Fraction(event.sign, 2)
                    twists[sheets[k]] += half
                    weight = weight * (Scalar.var('a1' if sheets[k] == 2 else 'a2', half) if trivial
                                       else Scalar.var('a', half))
                elif isinstance(event, SignEvent):
                    signs += 1
            for k in chosen[aid].detours:
                wall = self.chart.walls[arc.events[k].wall]
                weight = weight * Scalar.var('a', wall.turn) * arc.events[k].direction
                detours.append((aid, k))
        for cid, kind in types.items():
            if kind == 'exchange':
                eps = diagram.crossings[cid].sign
                turning[1] += Fraction(eps, 4)
                turning[2] -= Fraction(eps, 4)
                weight = weight * Scalar.z() * eps
        try:
            if trivial:
                weight = weight * Scalar.var('a2', turning[1]) * Scalar.var('a1', -turning[2])
            else:
                weight = weight * Scalar.var('a', turning[1] - turning[2] + faces)
        except ValueError as exc:
            raise NonGenericDiagramError(f"Turning {turning} is not half-integral: {exc}") from exc
        return LiftTerm({aid: chosen[aid].sheets for aid in diagram.arcs}, dict(types), tuple(detours),
                        weight, twists, signs)


def enumerate_lifts(diagram: LeafDiagram, chart: Optional[CoverChart] = None) -> LiftSum:
    return LiftEngine(chart).enumerate_lifts(diagram)


# ---------------------------------------------------------------------- component tracing
@dataclass
class LiftComponent:
    arcs: List[str]
    passages: List[Tuple[str, bool]]
    open: bool
    sheet: int


def trace_components(diagram: LeafDiagram, types: Mapping[str, str],
                     sheets: Optional[Mapping[str, Tuple[int, ...]]] = None,
                     smooth_kept: bool = False) -> List[LiftComponent]:
    """Follow lifted strands; kept crossings are recorded as passages unless smoothed."""
    open_starts = sorted((a for a in diagram.arcs.values() if a.tail is not None and a.tail.kind == 'in'),
                         key=lambda a: int(a.tail.ref))
    starts = [a.id for a in open_starts] + [aid for aid in diagram.arcs]
    visited: Set[str] = set()
    out: List[LiftComponent] = []
    for start in starts:
        if start in visited:
            continue
        arcs, passages = [], []
        aid = start
        is_open = diagram.arcs[start].tail is not None and diagram.arcs[start].tail.kind == 'in'
        while True:
            visited.add(aid)
            arcs.append(aid)
            head = diagram.arcs[aid].head
            if head is None or head.kind == 'out':
                break
            kind = types[head.ref]
            role = head.kind
            if kind == 'kept' and not smooth_kept:
                passages.append((head.ref, role == OVER))
                next_role = role
            elif kind == 'direct':
                next_role = role
            else:
                next_role = UNDER if role == OVER else OVER
            aid = diagram.arc_from(Port(next_role, head.ref))
            if aid == start:
                break
        sheet = sheets[start][0] if sheets is not None else 1
        out.append(LiftComponent(arcs, passages, is_open, sheet))
    return out


# ---------------------------------------------------------------------- descending diagrams
Passage = Tuple[str, bool]
GaussComponent = Tuple[Tuple[Passage, ...], bool]


def _first_bad_crossing(components: Sequence[GaussComponent]) -> Optional[str]:
    seen: Set[str] = set()
    for seq, _ in components:
        for cid, over in seq:
            if cid in seen:
                continue
            seen.add(cid)
            if not over:
                return cid
    return None


def _switch_gauss(components: Sequence[GaussComponent], signs: Mapping[str, int], cid: str):
    comps = [(tuple((c, (not o) if c == cid else o) for c, o in seq), is_open) for seq, is_open in components]
    new_signs = dict(signs)
    new_signs[cid] = -signs[cid]
    return comps, new_signs


def _smooth_gauss(components: Sequence[GaussComponent], signs: Mapping[str, int], cid: str):
    comps = [(list(seq), is_open) for seq, is_open in components]
    where = {over: (ci, pi) for ci, (seq, _) in enumerate(comps) for pi, (c, over) in enumerate(seq) if c == cid}
    (ca, pa), (cb, pb) = where[True], where[False]
    if ca == cb:
        seq, is_open = comps[ca]
        if is_open:
            if pa < pb:
                main, loop = seq[:pa] + seq[pb + 1:], seq[pa + 1:pb]
            else:
                main, loop = seq[:pb] + seq[pa + 1:], seq[pb + 1:pa]
        else:
            rotated = seq[pa:] + seq[:pa]
            q = (pb - pa) % len(seq)
            main, loop = rotated[q + 1:], rotated[1:q]
        comps[ca] = (main, is_open)
        comps.append((loop, False))
    else:
        (sa, open_a), (sb, open_b) = comps[ca], comps[cb]
        if open_a and open_b:
            raise EvaluationError("Smoothing would join two open strands on one sheet")
        if open_b:
            merged = sb[:pb] + sa[pa + 1:] + sa[:pa] + sb[pb + 1:]
        else:
            merged = sa[:pa] + sb[pb + 1:] + sb[:pb] + sa[pa + 1:]
        keep, drop = min(ca, cb), max(ca, cb)
        comps[keep] = (merged, open_a or open_b)
        del comps[drop]
    new_signs = {c: v for c, v in signs.items() if c != cid}
    return [(tuple(seq), is_open) for seq, is_open in comps], new_signs


def descending_homflypt(components: Sequence[GaussComponent], signs: Mapping[str, int], A: Scalar) -> Scalar:
    """Framed HOMFLYPT of a Gauss diagram by switching to a descending diagram.

    Open components are read relative to the straight strand. The skein relation
    A-free form K+ - K- = z K0 is used at the first crossing met from below.
    """
    components = list(components)
    if sum(1 for _, is_open in components if is_open) > 1:
        raise EvaluationError("At most one open strand per sheet can be evaluated")
    components.sort(key=lambda comp: not comp[1])
    cid = _first_bad_crossing(components)
    if cid is None:
        value = Scalar.one()
        unknot = (A - A.inverse()) / Scalar.z()
        for seq, is_open in components:
            counts: Dict[str, int] = {}
            for c, _ in seq:
                counts[c] = counts.get(c, 0) + 1
            writhe = sum(signs[c] for c, k in counts.items() if k == 2)
            value = value * A ** writhe
            if not is_open:
                value = value * unknot
        return value
    switched = descending_homflypt(*_switch_gauss(components, signs, cid), A)
    smoothed = descending_homflypt(*_smooth_gauss(components, signs, cid), A)
    return switched + Scalar.z() * smoothed * signs[cid]


def _gauss(components: Sequence[LiftComponent]) -> List[GaussComponent]:
    return [(tuple(c.passages), c.open) for c in components]


def source_value(diagram: LeafDiagram, avar: str = 'a') -> Scalar:
    """Framed HOMFLYPT of the leaf diagram itself (framing twists count A^{±1/2})."""
    A = framing_monomial(avar)
    types = {cid: 'kept' for cid in diagram.crossings}
    comps = trace_components(diagram, types)
    signs = {cid: c.sign for cid, c in diagram.crossings.items()}
    twist = sum((Fraction(e.sign, 2) for a in diagram.arcs.values() for e in a.events if isinstance(e, TwistEvent)),
                Fraction(0))
    return descending_homflypt(_gauss(comps), signs, A) * A ** twist


# ---------------------------------------------------------------------- evaluators
PlanarValue = Dict[Tuple[int, ...], Scalar]


def _require_trivial(lifts: LiftSum) -> None:
    if not lifts.chart.trivial:
        raise EvaluationError(f"The trivial-cover target needs a chart without walls or cuts, got {lifts.chart.kind}")


def evaluate_planar(lifts: LiftSum) -> PlanarValue:
    """Σ weight · Π_sheets HOMFLYPT(sheet i; a_i), keyed by the sheets of the open strands."""
    _require_trivial(lifts)
    diagram = lifts.diagram
    out: PlanarValue = {}
    for term in lifts.terms:
        comps = trace_components(diagram, term.crossing_types, term.sheets)
        value = term.weight
        for sheet in SHEETS:
            A = Scalar.var(f"a{sheet}")
            mine = [c for c in comps if c.sheet == sheet]
            signs = {cid: diagram.crossings[cid].sign for c in mine for cid, _ in c.passages}
            value = value * descending_homflypt(_gauss(mine), signs, A) * A ** term.twists.get(sheet, Fraction(0))
        key = tuple(c.sheet for c in comps if c.open)
        out[key] = out.get(key, Scalar.zero()) + value
    return {k: v for k, v in out.items() if v}


def evaluate_annular(lifts: LiftSum) -> SymTensor:
    """Σ weight · closure(sheet-1 braid) ⊗ closure(sheet-2 braid) via the Hecke oracle."""
    _require_trivial(lifts)
    diagram = lifts.diagram
    layout = diagram.braid
    if layout is None:
        raise EvaluationError("Annular evaluation needs a braid-shaped diagram")
    ordered = sorted(diagram.crossings.values(), key=lambda c: c.level)
    # lifts with the same braid word on each sheet share one pair of closures
    groups: Dict[Tuple[BraidWord, BraidWord], Scalar] = {}
    for term in lifts.terms:
        sheets = [term.sheets[aid][0] for aid in layout.bottom_arcs]
        words: Dict[int, List[int]] = {1: [], 2: []}
        for crossing in ordered:
            k = crossing.position
            kind = term.crossing_types[crossing.id]
            if kind == 'kept':
                sheet = sheets[k]
                r = sum(1 for p in range(k) if sheets[p] == sheet) + 1
                words[sheet].append(crossing.sign * r)
            elif kind == 'direct':
                sheets[k], sheets[k + 1] = sheets[k + 1], sheets[k]
        key = tuple(BraidWord(sheets.count(sheet), tuple(words[sheet])) if sheet in sheets else None
                    for sheet in SHEETS)
        groups[key] = groups.get(key, Scalar.zero()) + term.weight
    total = SymTensor(SCHUR, {}, layout.strands)
    for key, weight in groups.items():
        if not weight:
            continue
        closures = [hecke_closure(word) if word is not None else SymSeries.unit(SCHUR, 0) for word in key]
        total = total + SymTensor.pure(closures[0], closures[1], weight)
    return SymTensor(SCHUR, total.coeffs, layout.strands)


def evaluate_trivial_cover(lifts: LiftSum):
    """Annular charts give a tensor; planar charts give a scalar (closed) or values keyed by open sheets."""
    if lifts.chart.kind == 'annular':
        return evaluate_annular(lifts)
    values = evaluate_planar(lifts)
    if not lifts.diagram.terminals():
        return values.get((), Scalar.zero())
    return values


def _gl1_scalar(weight: Scalar) -> Scalar:
    """Specialize a ↦ s; anything else left in the weight is an error."""
    out = Scalar.zero()
    for mono, coeff in weight.terms.items():
        a2, rest = mono[0], mono[1:]
        if any(rest):
            raise EvaluationError(f"Weight {weight} involves variables other than a")
        if a2 % 2:
            raise EvaluationError(f"Weight {weight} has a half-integral power of a")
        out = out + Scalar.const(coeff) * Scalar.s_power(a2 // 2)
    return out


def evaluate_homological(lifts: LiftSum, torus: Optional[QuantumTorus] = None) -> QTElement:
    """gl(1) image: same-sheet crossings resolve to q^{ε/2}·smoothing, components map to P_{class}."""
    torus = torus or QuantumTorus()
    diagram, chart = lifts.diagram, lifts.chart
    total = torus.zero()
    for term in lifts.terms:
        value = _gl1_scalar(term.weight) * (-1) ** term.signs
        eps = sum(diagram.crossings[c].sign for c, kind in term.crossing_types.items() if kind == 'kept')
        value = value * Scalar.s_power(eps)
        detour_cls = {}
        for aid, k in term.detours:
            detour_cls.setdefault(aid, []).append(chart.walls[diagram.arcs[aid].events[k].wall].cls)
        comps = trace_components(diagram, term.crossing_types, term.sheets, smooth_kept=True)
        comps.sort(key=lambda c: (c.sheet, list(diagram.arcs).index(c.arcs[0])))
        image = torus.unit()
        for comp in comps:
            i = j = 0
            for aid in comp.arcs:
                for seg, sheet in zip(diagram.arcs[aid].segments, term.sheets[aid]):
                    sign = 1 if sheet == 1 else -1
                    i += sign * seg.cls[0]
                    j += sign * seg.cls[1]
                for di, dj in detour_cls.get(aid, []):
                    i += di
                    j += dj
            image = torus.multiply(image, torus.specialize_P((i, j)) if (i, j) != (0, 0) else torus.unit())
        total = total + image.scale(value)
    return total


TARGETS = {
    'trivial': evaluate_trivial_cover,
    'gl1': evaluate_homological,
}


def evaluate(lifts: LiftSum, target: str = 'trivial'):
    if target not in TARGETS:
        raise ValueError(f"Unsupported target: {target}. Choose from {list(TARGETS.keys())}")
    return TARGETS[target](lifts)


# ---------------------------------------------------------------------- verifiers
def verify_coproduct_on_braid(braid: BraidWord) -> VerificationReport:
    """Lift of the annular closure over the trivial cover equals Δ(closure)."""
    started = time.perf_counter()
    diagram = LeafDiagram.from_braid(braid, 'annular')
    lifted = evaluate_annular(enumerate_lifts(diagram, CoverChart.trivial_chart('annular')))
    expected = coproduct(hecke_closure(braid))
    residual = lifted - expected
    pieces = []
    for k in range(braid.strands + 1):
        part = SymTensor(SCHUR, {key: v for key, v in residual.coeffs.items() if key[0].size == k}, braid.strands)
        pieces.append((f"({k},{braid.strands - k})", part))
    return build_report(f"coproduct {braid.render()}", braid.strands, pieces, started)


def all_braids(max_strands: int, max_length: int):
    for n in range(1, max_strands + 1):
        letters = [g for k in range(1, n) for g in (k, -k)]
        words: List[Tuple[int, ...]] = [()]
        for length in range(max_length + 1):
            for w in words:
                yield BraidWord(n, w)
            words = [w + (g,) for w in words for g in letters] if letters else []


def rotation_representatives(braids: Iterable[BraidWord]) -> List[BraidWord]:
    """One word per cyclic rotation class, in first-seen order.

    Rotating a word conjugates the braid, and both words close up to the same annular diagram.
    """
    seen: Set[BraidWord] = set()
    out: List[BraidWord] = []
    for braid in braids:
        if braid in seen:
            continue
        seen.update(braid.conjugate(k) for k in range(max(1, len(braid))))
        out.append(braid)
    return out


def random_braid(rng: random.Random, strands: int, length: int) -> BraidWord:
    letters = [g for k in range(1, strands) for g in (k, -k)]
    return BraidWord(strands, tuple(rng.choice(letters) for _ in range(length)) if letters else ())


def verify_coproduct_sweep(max_strands: int = 3, max_length: int = 4, random_cases: int = 0,
                           seed: int = 0, random_strands: int = 4, random_length: int = 8,
                           workers: int = 1) -> VerificationReport:
    """Coproduct check on every braid word up to rotation, plus ``random_cases`` random braids.

    ``workers > 1`` spreads the braids over a process pool; the report does not depend on it.
    """
    started = time.perf_counter()
    exhaustive = list(all_braids(max_strands, max_length))
    braids = rotation_representatives(exhaustive)
    rng = random.Random(seed)
    braids += [random_braid(rng, random_strands, rng.randint(0, random_length)) for _ in range(random_cases)]
    logger.info("Coproduct sweep: %d words, %d up to rotation, %d random, %d worker(s)",
                len(exhaustive), len(braids) - random_cases, random_cases, workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(verify_coproduct_on_braid, braids, chunksize=64))
    else:
        reports = [verify_coproduct_on_braid(b) for b in braids]
    merged = merge_reports('coproduct sweep', f"n<={max_strands}, len<={max_length}, random={random_cases}", reports)
    merged.notes.update(words=len(exhaustive), checked=len(braids))
    merged.seconds = time.perf_counter() - started
    return merged


def _planar_residuals(label: str, left: PlanarValue, right: PlanarValue) -> List[Tuple[str, Scalar]]:
    keys = sorted(set(left) | set(right))
    return [(f"{label} {k}", left.get(k, Scalar.zero()) - right.get(k, Scalar.zero())) for k in keys] or \
        [(label, Scalar.zero())]


def _trivial_eval(diagram: LeafDiagram) -> PlanarValue:
    return evaluate_planar(enumerate_lifts(diagram, CoverChart.trivial_chart('planar')))


def skein_relation_suite(seed: int = 0, cases: int = 20, max_strands: int = 3, max_length: int = 5) -> VerificationReport:
    """lift(K+) - lift(K-) = z·lift(K0) on random planar braid closures, plus agreement with HOMFLYPT(a1a2)."""
    started = time.perf_counter()
    rng = random.Random(seed)
    z = Scalar.z()
    residuals: List[Tuple[str, Scalar]] = []
    for case in range(cases):
        braid = random_braid(rng, rng.randint(2, max_strands), rng.randint(1, max_length))
        diagram = LeafDiagram.from_braid(braid, 'planar')
        cid = rng.choice(sorted(diagram.crossings))
        plus = diagram if diagram.crossings[cid].sign > 0 else diagram.switch(cid)
        minus = plus.switch(cid)
        zero = plus.smooth(cid)
        lhs = _trivial_eval(plus)
        rhs_minus, rhs_zero = _trivial_eval(minus), _trivial_eval(zero)
        rhs = {k: rhs_minus.get(k, Scalar.zero()) + z * rhs_zero.get(k, Scalar.zero())
               for k in set(rhs_minus) | set(rhs_zero)}
        residuals.extend(_planar_residuals(f"case {case} [{braid.render()}] skein", lhs, rhs))
        expected = {(): planar_closure_value(braid, 'a1a2')}
        residuals.extend(_planar_residuals(f"case {case} [{braid.render()}] homflypt", _trivial_eval(diagram), expected))
    return build_report('lift skein relation', cases, residuals, started)


def _torus_loop(events: Sequence[Event], first_class: Tuple[int, int] = (1, 0)) -> LeafDiagram:
    segments = [Segment(Fraction(0), first_class)] + [Segment() for _ in events]
    return LeafDiagram({}, {'t0': Arc('t0', None, None, segments, list(events))})


def default_torus_chart() -> CoverChart:
    return CoverChart('torus', {'w1': Wall('w1', 1, 2, Fraction(1), (0, 1))}, {'k1'}, {'l1'})


def move_invariance_suite(seed: int = 0, cases: int = 5) -> VerificationReport:
    """Reidemeister moves on the trivial cover and wall / sign-line moves on the torus target."""
    started = time.perf_counter()
    rng = random.Random(seed)
    residuals: List[Tuple[str, object]] = []
    for case in range(cases):
        n = rng.randint(2, 3)
        u = random_braid(rng, n, rng.randint(0, 3))
        v = random_braid(rng, n, rng.randint(0, 3))
        k = rng.randint(1, n - 1)
        base = BraidWord(n, u.word + v.word)
        r2 = BraidWord(n, u.word + (k, -k) + v.word)
        residuals.extend(_planar_residuals(f"R2 case {case}", _trivial_eval(LeafDiagram.from_braid(base, 'planar')),
                                           _trivial_eval(LeafDiagram.from_braid(r2, 'planar'))))
        if n == 3:
            left = BraidWord(n, u.word + (1, 2, 1) + v.word)
            right = BraidWord(n, u.word + (2, 1, 2) + v.word)
            residuals.extend(_planar_residuals(f"R3 case {case}",
                                               _trivial_eval(LeafDiagram.from_braid(left, 'planar')),
                                               _trivial_eval(LeafDiagram.from_braid(right, 'planar'))))
    for sign in (1, -1):
        residuals.extend(_planar_residuals(f"framed R1 {sign:+d}", _trivial_eval(LeafDiagram.kink(sign)),
                                           _trivial_eval(LeafDiagram.strand().insert_twists('e0', sign, 2))))
    chart = default_torus_chart()
    base = _torus_loop([WallEvent('w1', 1), CutEvent('k1')])
    pushed = _torus_loop([WallEvent('w1', 1), WallEvent('w1', -1), WallEvent('w1', 1), CutEvent('k1')])
    residuals.append(('wall push', evaluate_homological(enumerate_lifts(pushed, chart))
                      - evaluate_homological(enumerate_lifts(base, chart))))
    plain = _torus_loop([])
    doubled = _torus_loop([SignEvent('l1'), SignEvent('l1')])
    residuals.append(('double sign line', evaluate_homological(enumerate_lifts(doubled, chart))
                      - evaluate_homological(enumerate_lifts(plain, chart))))
    return build_report('lift move invariance', cases, residuals, started)


def lift_count_bound(diagram: LeafDiagram, chart: CoverChart) -> int:
    eligible = sum(1 for a in diagram.arcs.values() for e in a.events if isinstance(e, WallEvent))
    return 2 ** len(diagram.arcs) * 2 ** len(diagram.crossings) * 2 ** eligible


def _term_by_types(lifts: LiftSum, kinds: Mapping[str, str], sheet: int) -> Scalar:
    return sum((t.weight for t in lifts.terms
                if t.crossing_types == dict(kinds) and next(iter(t.sheets.values()))[0] == sheet), Scalar.zero())


def verify_lift_tables() -> VerificationReport:
    """Unknot and kink lift sums term by term, and their trivial-cover evaluations."""
    started = time.perf_counter()
    a1, a2, z = Scalar.var('a1'), Scalar.var('a2'), Scalar.z()
    residuals: List[Tuple[str, Scalar]] = []

    unknot = enumerate_lifts(LeafDiagram.unknot())
    residuals.append(('unknot terms', Scalar.const(len(unknot) - 2)))
    residuals.append(('unknot on sheet 1', _term_by_types(unknot, {}, 1) - a2))
    residuals.append(('unknot on sheet 2', _term_by_types(unknot, {}, 2) - a1.inverse()))
    residuals.append(('unknot value', evaluate_planar(unknot).get((), Scalar.zero()) - unknot_value('a1a2')))

    kink = enumerate_lifts(LeafDiagram.kink())
    cid = next(iter(kink.diagram.crossings))
    residuals.append(('kink terms', Scalar.const(len(kink) - 3)))
    residuals.append(('kink kept on 1', _term_by_types(kink, {cid: 'kept'}, 1) - a2.inverse()))
    residuals.append(('kink kept on 2', _term_by_types(kink, {cid: 'kept'}, 2) - a1))
    residuals.append(('kink exchange', _term_by_types(kink, {cid: 'exchange'}, 1) - a1 * z))
    values = evaluate_planar(kink)
    for sheet in SHEETS:
        residuals.append((f"kink value {(sheet,)}", values.get((sheet,), Scalar.zero()) - a1 * a2))
    return build_report('lift tables', 'unknot, kink', residuals, started)
