"""Coefficient algebras over F_p, their elements, and the shared text syntax.

An algebra has a monomial basis indexed by exponent tuples.  Commutative
polynomial rings and the level-0 Weyl algebra (see :mod:`charvar.weyl`) both
derive from :class:`Algebra`; they differ only in how two basis monomials
multiply.
"""

import re
from functools import lru_cache


ORDERS = ("degrevlex", "lex", "weighted")


class ContextError(ValueError):
    """Elements from different ring contexts were combined."""


class ParseError(ValueError):
    def __init__(self, msg, line=None, col=None):
        self.msg, self.line, self.col = msg, line, col
        where = []
        if line is not None:
            where.append(f"line {line}")
        if col is not None:
            where.append(f"col {col}")
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p):
    if not isinstance(p, int) or not is_prime(p) or p >= 2**31:
        raise ValueError(f"characteristic must be a prime < 2^31, got {p!r}")
    return p


def divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def exp_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def exp_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def exp_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class Algebra:
    """An F_p-algebra with monomial basis indexed by exponent tuples.

    ``weights`` is the filtration weight per variable; ``order`` picks the
    monomial order used to break ties (see :meth:`key`).  ``elim`` > 0 turns
    the order into a block order eliminating the first ``elim`` variables.
    """

    commutative = True

    def __init__(self, names, p=7, weights=None, order="degrevlex", elim=0):
        if order not in ORDERS:
            raise ValueError(f"unknown monomial order {order!r}")
        self.names = tuple(names)
        self.n = len(self.names)
        self.p = check_prime(p)
        self.weights = tuple(weights) if weights is not None else (1,) * self.n
        if len(self.weights) != self.n:
            raise ValueError("one weight per variable")
        self.order = order
        self.elim = elim
        self._keys = {}
        self._index = {name: i for i, name in enumerate(self.names)}

    # identity -----------------------------------------------------------
    def signature(self):
        return (type(self).__name__, self.names, self.p, self.weights, self.order, self.elim)

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(self.names)}; p={self.p}, {self.order})"

    # monomials ----------------------------------------------------------
    def zero_exp(self):
        return (0,) * self.n

    def var_exp(self, i):
        e = [0] * self.n
        e[i] = 1
        return tuple(e)

    def wdeg(self, e):
        return sum(w * x for w, x in zip(self.weights, e))

    def key(self, e):
        """Sort key of a monomial: larger key means larger monomial."""
        k = self._keys.get(e)
        if k is None:
            rev = tuple(-x for x in reversed(e))
            if self.order == "lex":
                k = e
            elif self.order == "degrevlex":
                k = (sum(e), rev)
            else:
                k = (self.wdeg(e), sum(e), rev)
            if self.elim:
                k = (sum(e[: self.elim]), k)
            self._keys[e] = k
        return k

    def mono_mul(self, a, b):
        """Product of basis monomials as a sequence of (exponent, coeff)."""
        return ((exp_add(a, b), 1),)

    def antipode_terms(self, terms):
        """Anti-involution used to swap module sides (identity if commutative)."""
        return dict(terms)

    # elements -----------------------------------------------------------
    element_class = None

    def element(self, terms):
        return (self.element_class or Poly)(self, terms)

    def zero(self):
        return self.element({})

    def one(self):
        return self.const(1)

    def const(self, c):
        return self.element({self.zero_exp(): c})

    def gen(self, name):
        if name not in self._index:
            raise ContextError(f"{name!r} is not a variable of {self!r}")
        return self.element({self.var_exp(self._index[name]): 1})

    def gens(self):
        return [self.gen(n) for n in self.names]

    def index(self, name):
        return self._index[name]

    def mul_terms(self, f, g):
        p = self.p
        out = {}
        for a, ca in f.items():
            for b, cb in g.items():
                for e, c in self.mono_mul(a, b):
                    out[e] = (out.get(e, 0) + ca * cb * c) % p
        return {e: c for e, c in out.items() if c}

    def with_order(self, order, weights=None, elim=0):
        return type(self)(self.names, self.p, weights if weights is not None else self.weights, order, elim)

    # text ---------------------------------------------------------------
    def format_mono(self, e):
        parts = []
        for name, x in zip(self.names, e):
            if x == 1:
                parts.append(name)
            elif x > 1:
                parts.append(f"{name}^{x}")
        return "*".join(parts)

    def format_coeff(self, c):
        return c if c <= self.p // 2 else c - self.p

    def format_terms(self, terms):
        if not terms:
            return "0"
        out = []
        for e in sorted(terms, key=self.key, reverse=True):
            c = self.format_coeff(terms[e])
            mono = self.format_mono(e)
            mag = abs(c)
            body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def parse(self, text, aliases=None):
        """Parse the shared text syntax, e.g. ``3*t1^2*xi1 - 2``."""
        def lookup(name):
            if aliases and name in aliases:
                return aliases[name]
            if name in self._index:
                return self.gen(name)
            raise ContextError(f"unknown variable {name!r}")
        return parse_expr(text, lookup, self.const)


class PolyRing(Algebra):
    """Commutative polynomial ring F_p[names]."""


class Poly:
    """Immutable element of an :class:`Algebra`: a map monomial -> nonzero coeff."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        p = ring.p
        self.ring = ring
        self.terms = {e: c % p for e, c in terms.items() if c % p}
        self._hash = None

    def _check(self, other):
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if other.ring != self.ring:
            raise ContextError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return self.ring.element(t)

    __radd__ = __add__

    def __neg__(self):
        return self.ring.element({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.ring.element({e: c * other for e, c in self.terms.items()})
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.ring.element(self.ring.mul_terms(self.terms, other.terms))

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power")
        out, base = self.ring.one(), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return isinstance(other, Poly) and other.ring == self.ring and other.terms == self.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def lm(self):
        return max(self.terms, key=self.ring.key)

    def lc(self):
        return self.terms[self.lm()]

    def monic(self):
        inv = pow(self.lc(), self.ring.p - 2, self.ring.p)
        return self * inv

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def wdeg(self):
        return max((self.ring.wdeg(e) for e in self.terms), default=None)

    def support_vars(self):
        s = set()
        for e in self.terms:
            s.update(i for i, x in enumerate(e) if x)
        return s

    def __str__(self):
        return self.ring.format_terms(self.terms)

    def __repr__(self):
        return f"<{self}>"


# ---------------------------------------------------------------------------
# text syntax

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|\^|\*|\+|-|\(|\)))")


def tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", col=pos + 1)
        col = m.start(m.lastindex) + 1
        if m.group(1):
            out.append(("int", int(m.group(1)), col))
        elif m.group(2):
            out.append(("name", m.group(2), col))
        else:
            op = m.group(3)
            out.append(("op", "^" if op == "**" else op, col))
        pos = m.end()
    return out


def parse_expr(text, lookup, const):
    """Recursive-descent parser for sums of products of powers.

    Products are evaluated left to right, so noncommutative algebras see the
    factors in the order written.
    """
    toks = tokenize(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("end", None, len(text) + 1)

    def take():
        nonlocal i
        t = peek()
        i += 1
        return t

    def expr():
        sign = 1
        if peek()[:2] in (("op", "+"), ("op", "-")):
            sign = -1 if take()[1] == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while peek()[:2] in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = factor()
        while peek()[:2] == ("op", "*"):
            take()
            acc = acc * factor()
        return acc

    def factor():
        base = atom()
        if peek()[:2] == ("op", "^"):
            take()
            kind, val, col = take()
            if kind != "int":
                raise ParseError("exponent must be a non-negative integer", col=col)
            base = base ** val
        return base

    def atom():
        kind, val, col = take()
        if kind == "int":
            return const(val)
        if kind == "name":
            try:
                return lookup(val)
            except ContextError as exc:
                raise ParseError(str(exc), col=col) from None
        if (kind, val) == ("op", "("):
            v = expr()
            k2, v2, c2 = take()
            if (k2, v2) != ("op", ")"):
                raise ParseError("expected ')'", col=c2)
            return v
        raise ParseError("expected a term", col=col)

    if not toks:
        raise ParseError("empty expression", col=1)
    out = expr()
    if i != len(toks):
        raise ParseError(f"unexpected token {peek()[1]!r}", col=peek()[2])
    return out


@lru_cache(maxsize=None)
def cotangent_ring(d, p=7, order="weighted"):
    """k[t1..td, xi1..xid] with weight 0 on t and 1 on xi."""
    names = [f"t{i}" for i in range(1, d + 1)] + [f"xi{i}" for i in range(1, d + 1)]
    return PolyRing(names, p, (0,) * d + (1,) * d, order)
