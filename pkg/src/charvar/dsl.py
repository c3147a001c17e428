"""Line-oriented session language: parsing and canonical printing."""

import re
from dataclasses import dataclass, field

from .rings import ParseError, check_prime

VERBS = ("gr", "car", "holonomic", "purity", "ext", "strict", "resolve", "conormal",
         "isotropy", "lagrangian", "containment", "relabel", "fixtures")

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class RingDecl:
    p: int
    d: int
    log: tuple = ()

    @property
    def r(self):
        return len(self.log)


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    kind: str                      # cokernel | connection | directsum
    rows: tuple = ()               # cokernel: tuple of rows, each a tuple of operator texts
    shifts: tuple = None
    mats: tuple = ()               # connection: ((key, matrix rows), ...), key like "A1" / "B2"
    parts: tuple = ()              # directsum: module names


@dataclass(frozen=True)
class Command:
    verb: str
    target: str = None
    params: tuple = ()             # ((key, value), ...)
    items: tuple = None            # bracketed polynomial list
    number: int = None


@dataclass
class Session:
    ring: RingDecl = None
    statements: list = field(default_factory=list)
    lines: list = field(default_factory=list)

    def modules(self):
        return [s for s in self.statements if isinstance(s, ModuleDecl)]

    def commands(self):
        return [s for s in self.statements if isinstance(s, Command)]


def _norm(text):
    return " ".join(text.split())


def split_top(text, sep):
    """Split on ``sep`` outside parentheses and brackets; returns (piece, offset) pairs."""
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            out.append((text[start:i], start))
            start = i + 1
    out.append((text[start:], start))
    return out


def _bracket(line, start, lineno):
    """Content of the [...] starting at or after ``start``; returns (content, offset, end)."""
    i = line.find("[", start)
    if i < 0:
        raise ParseError("expected '['", lineno, start + 1)
    depth = 0
    for j in range(i, len(line)):
        if line[j] == "[":
            depth += 1
        elif line[j] == "]":
            depth -= 1
            if depth == 0:
                return line[i + 1:j], i + 1, j + 1
    raise ParseError("unclosed '['", lineno, i + 1)


def _items(content, offset, lineno):
    out = []
    for piece, off in split_top(content, ";"):
        if not piece.strip():
            if content.strip():
                raise ParseError("empty entry", lineno, offset + off + 1)
            continue
        out.append(_norm(piece))
    return tuple(out)


def _int_list(text, lineno, col):
    if text == "":
        return ()
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}", lineno, col) from None


def _name(tok, lineno, col):
    if not _NAME.match(tok):
        raise ParseError(f"invalid name {tok!r}", lineno, col)
    return tok


def _parse_ring(line, lineno):
    fields = {}
    pos = len("ring")
    for m in re.finditer(r"(\S+)", line[pos:]):
        tok, col = m.group(1), pos + m.start() + 1
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", lineno, col)
        k, v = tok.split("=", 1)
        if k not in ("p", "d", "log") or k in fields:
            raise ParseError(f"unexpected ring field {k!r}", lineno, col)
        fields[k] = (v, col)
    if "p" not in fields or "d" not in fields:
        raise ParseError("ring needs p=<prime> and d=<n>", lineno, 1)
    try:
        p = int(fields["p"][0])
        check_prime(p)
    except ValueError:
        raise ParseError(f"p must be a prime, got {fields['p'][0]!r}", lineno, fields["p"][1]) from None
    try:
        d = int(fields["d"][0])
        if d < 0:
            raise ValueError
    except ValueError:
        raise ParseError("d must be a non-negative integer", lineno, fields["d"][1]) from None
    log = ()
    if "log" in fields:
        v, col = fields["log"]
        log = tuple(x for x in _int_list(v, lineno, col) if x != 0)
        if tuple(sorted(log)) != tuple(range(1, len(log) + 1)) or len(log) > d:
            raise ParseError("log components must be 1..r with r <= d", lineno, col)
        log = tuple(sorted(log))
    return RingDecl(p, d, log)


def _parse_module(line, lineno):
    m = re.match(r"module\s+(\S+)\s*=\s*(\S+)", line)
    if not m:
        raise ParseError("expected 'module <name> = <kind> ...'", lineno, 1)
    name = _name(m.group(1), lineno, m.start(1) + 1)
    kind = m.group(2)
    rest_at = m.end(2)
    if kind == "cokernel":
        content, off, end = _bracket(line, rest_at, lineno)
        rows = []
        for piece, poff in split_top(content, ";"):
            if not piece.strip():
                if content.strip():
                    raise ParseError("empty relation", lineno, off + poff + 1)
                continue
            s = piece.strip()
            if s.startswith("("):
                if not s.endswith(")"):
                    raise ParseError("unclosed tuple", lineno, off + poff + 1)
                entries = [_norm(x) for x, _ in split_top(s[1:-1], ",")]
                if any(not x for x in entries):
                    raise ParseError("empty tuple entry", lineno, off + poff + 1)
                rows.append(tuple(entries))
            else:
                rows.append((_norm(s),))
        shifts = None
        tail = line[end:].strip()
        if tail:
            sm = re.fullmatch(r"shifts=(\S*)", tail)
            if not sm:
                raise ParseError(f"unexpected text {tail!r}", lineno, end + 1)
            shifts = _int_list(sm.group(1), lineno, end + 1)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ParseError("relation rows have different lengths", lineno, off + 1)
        if shifts is not None and rows and len(shifts) != len(rows[0]):
            raise ParseError("shifts must have one entry per generator", lineno, end + 1)
        return ModuleDecl(name, "cokernel", tuple(rows), shifts)
    if kind == "connection":
        mats = []
        rest = line[rest_at:]
        i = 0
        while i < len(rest):
            if rest[i].isspace():
                i += 1
                continue
            km = re.match(r"([AB]\d+)=", rest[i:])
            if not km:
                raise ParseError("expected A<i>=... or B<i>=...", lineno, rest_at + i + 1)
            key = km.group(1)
            j = i + km.end()
            if j < len(rest) and rest[j] == "[":
                content, off, end = _bracket(rest, j, lineno)
                mrows = tuple(tuple(_norm(x) for x, _ in split_top(r, ",")) for r, _ in split_top(content, ";"))
                i = end
            else:
                k = j
                while k < len(rest) and not rest[k].isspace():
                    k += 1
                mrows = ((_norm(rest[j:k]),),)
                i = k
            if any(k2 == key for k2, _ in mats):
                raise ParseError(f"duplicate matrix {key}", lineno, rest_at + i + 1)
            mats.append((key, mrows))
        return ModuleDecl(name, "connection", mats=tuple(mats))
    if kind == "directsum":
        parts = line[rest_at:].split()
        if len(parts) < 2:
            raise ParseError("directsum needs at least two modules", lineno, rest_at + 1)
        return ModuleDecl(name, "directsum", parts=tuple(_name(x, lineno, rest_at + 1) for x in parts))
    raise ParseError(f"unknown module kind {kind!r}", lineno, m.start(2) + 1)


def _parse_command(line, lineno):
    verb = line.split()[0]
    if verb not in VERBS:
        raise ParseError(f"unknown verb {verb!r}", lineno, 1)
    rest_at = len(verb)
    items = None
    if "[" in line:
        content, off, end = _bracket(line, rest_at, lineno)
        items = _items(content, off, lineno)
        if line[end:].strip():
            raise ParseError("unexpected text after ']'", lineno, end + 1)
        head = line[rest_at:line.find("[")]
    else:
        head = line[rest_at:]
    toks = [(m.group(0), m.start() + rest_at + 1) for m in re.finditer(r"\S+", head)]
    target, params, number = None, [], None
    for tok, col in toks:
        if "=" in tok:
            k, v = tok.split("=", 1)
            params.append((k, v))
        elif tok.lstrip("-").isdigit():
            if number is not None:
                raise ParseError("too many numeric arguments", lineno, col)
            number = int(tok)
        else:
            if target is not None:
                raise ParseError("too many arguments", lineno, col)
            target = tok if verb == "fixtures" else _name(tok, lineno, col)
    cmd = Command(verb, target, tuple(params), items, number)
    _check_arity(cmd, lineno)
    return cmd


_ARITY = {
    # verb: (target required, number allowed, items allowed, allowed params)
    "gr": ("module", False, False, ()),
    "car": ("module", False, False, ()),
    "holonomic": ("module", False, False, ()),
    "purity": ("module", False, False, ()),
    "ext": ("module", "required", False, ()),
    "strict": ("module", False, False, ()),
    "resolve": ("module", "optional", False, ()),
    "conormal": (None, False, False, ("S",)),
    "isotropy": ("either", False, True, ()),
    "lagrangian": ("either", False, True, ()),
    "containment": ("module", False, False, ()),
    "relabel": (None, False, "required", ("m",)),
    "fixtures": ("path", False, False, ()),
}


def _check_arity(cmd, lineno):
    tgt, num, items, allowed = _ARITY[cmd.verb]
    bad = [k for k, _ in cmd.params if k not in allowed]
    if bad:
        raise ParseError(f"{cmd.verb}: unexpected parameter {bad[0]!r}", lineno, 1)
    if tgt in ("module", "path") and cmd.target is None:
        raise ParseError(f"{cmd.verb}: missing {tgt} argument", lineno, 1)
    if tgt is None and cmd.target is not None:
        raise ParseError(f"{cmd.verb}: takes no module argument", lineno, 1)
    if tgt == "either" and (cmd.target is None) == (cmd.items is None):
        raise ParseError(f"{cmd.verb}: give a module name or a [ ... ] ideal", lineno, 1)
    if num == "required" and cmd.number is None:
        raise ParseError(f"{cmd.verb}: missing integer argument", lineno, 1)
    if not num and cmd.number is not None:
        raise ParseError(f"{cmd.verb}: unexpected integer argument", lineno, 1)
    if not items and cmd.items is not None:
        raise ParseError(f"{cmd.verb}: unexpected list argument", lineno, 1)
    if items == "required" and cmd.items is None:
        raise ParseError(f"{cmd.verb}: missing [ ... ] list", lineno, 1)
    if cmd.verb == "relabel" and "m" not in dict(cmd.params):
        raise ParseError("relabel needs m=<level>", lineno, 1)
    if cmd.verb == "conormal" and "S" not in dict(cmd.params):
        raise ParseError("conormal needs S=<i,j,...> (possibly empty)", lineno, 1)


def strip_comment(line):
    i = line.find("#")
    return line if i < 0 else line[:i]


def parse_session(text):
    s = Session()
    names = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        try:
            verb = body.split()[0]
            if verb == "ring":
                if s.ring is not None:
                    raise ParseError("only one ring declaration is allowed", lineno, 1)
                if s.statements:
                    raise ParseError("the ring must be declared before anything else", lineno, 1)
                s.ring = _parse_ring(body, lineno)
                s.lines.append(lineno)
                continue
            if verb == "module":
                decl = _parse_module(body, lineno)
                if decl.name in names:
                    raise ParseError(f"module {decl.name!r} is already defined", lineno, 1)
                for part in decl.parts:
                    if part not in names:
                        raise ParseError(f"unknown module {part!r}", lineno, 1)
                names.add(decl.name)
                s.statements.append(decl)
            else:
                s.statements.append(_parse_command(body, lineno))
            s.lines.append(lineno)
        except ParseError as exc:
            if exc.col is not None and indent:
                raise ParseError(exc.msg, lineno, exc.col + indent) from None
            raise
    return s


# ---------------------------------------------------------------------------
# canonical printing

def format_ring(r):
    out = f"ring p={r.p} d={r.d}"
    if r.log:
        out += " log=" + ",".join(map(str, r.log))
    return out


def _format_matrix(rows):
    if len(rows) == 1 and len(rows[0]) == 1:
        return rows[0][0]
    return "[" + "; ".join(", ".join(r) for r in rows) + "]"


def format_statement(st):
    if isinstance(st, ModuleDecl):
        if st.kind == "cokernel":
            rows = "; ".join(r[0] if len(r) == 1 else "(" + ", ".join(r) + ")" for r in st.rows)
            out = f"module {st.name} = cokernel [ {rows} ]" if rows else f"module {st.name} = cokernel [ ]"
            if st.shifts is not None:
                out += " shifts=" + ",".join(map(str, st.shifts))
            return out
        if st.kind == "connection":
            mats = " ".join(f"{k}={_format_matrix(m)}" for k, m in st.mats)
            return f"module {st.name} = connection {mats}".rstrip()
        return f"module {st.name} = directsum " + " ".join(st.parts)
    parts = [st.verb]
    if st.target is not None:
        parts.append(st.target)
    if st.number is not None:
        parts.append(str(st.number))
    parts += [f"{k}={v}" for k, v in st.params]
    if st.items is not None:
        parts.append("[ " + "; ".join(st.items) + " ]" if st.items else "[ ]")
    return " ".join(parts)


def format_session(s):
    lines = []
    if s.ring is not None:
        lines.append(format_ring(s.ring))
    lines += [format_statement(st) for st in s.statements]
    return "\n".join(lines) + "\n"
