"""Word representations and the textual word grammar.

Two representations are used throughout the package:

* a *normal word* is a tuple of ``m`` integers; entry ``i`` is the exponent of
  generator ``i`` (0-based). It stands for the product
  ``x_m^{r_m} ... x_1^{r_1}``, read from the largest generator down.
* a *free word* is a tuple of ``(gen, exp)`` letters with ``exp != 0`` and no
  two adjacent letters on the same generator.
"""

from __future__ import annotations

import re

from .errors import PresentationSyntaxError

_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_.]*)(?:\^(-?\d+))?$")


def free_word(letters):
    """Freely reduce a sequence of ``(gen, exp)`` pairs.

    >>> free_word([(0, 1), (0, -1), (1, 2), (1, 3), (0, 0)])
    ((1, 5),)
    """
    out = []
    for g, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out[-1][1]
            out.pop()
            if e == 0:
                continue
        out.append((g, e))
    return tuple(out)


def letters_of(word):
    """Letters of a normal word, largest generator first."""
    return tuple((i, e) for i in range(len(word) - 1, -1, -1) if (e := word[i]))


def inverse_letters(letters):
    return tuple((g, -e) for g, e in reversed(letters))


def identity(m):
    return (0,) * m


def generator(m, i, e=1):
    w = [0] * m
    w[i] = e
    return tuple(w)


def support(word):
    return [i for i, e in enumerate(word) if e]


def format_letters(letters, names):
    if not letters:
        return "1"
    return " ".join(names[g] if e == 1 else f"{names[g]}^{e}" for g, e in letters)


def format_word(word, names):
    """Render a normal word in the ``<word>`` grammar.

    >>> format_word((2, 0, 1), ["a", "b", "c"])
    'c a^2'
    """
    return format_letters(letters_of(word), names)


def parse_word(text, index, *, line=0, column=1):
    """Parse a free word: ``1`` or whitespace separated ``name`` / ``name^e``.

    ``index`` maps generator names to indices. Letters may come in any order;
    the result is freely reduced.
    """
    return free_word(_factors(text, index, line, column))


def _factors(text, index, line, column):
    letters = []
    stripped = text.strip()
    if stripped == "1":
        return ()
    if not stripped:
        raise PresentationSyntaxError("empty word", line, column)
    for m in re.finditer(r"\S+", text):
        tok = m.group(0)
        col = column + m.start()
        fm = _FACTOR.match(tok)
        if not fm:
            raise PresentationSyntaxError(f"bad factor {tok!r}", line, col)
        name, exp = fm.group(1), fm.group(2)
        if name not in index:
            raise PresentationSyntaxError(f"unknown generator {name!r}", line, col)
        e = int(exp) if exp is not None else 1
        if e == 0:
            raise PresentationSyntaxError(f"zero exponent in {tok!r}", line, col)
        letters.append((index[name], e))
    return tuple(letters)


def parse_normal_word(text, index, m, *, line=0, column=1):
    """Parse a word whose factors are in strictly descending generator order."""
    letters = _factors(text, index, line, column)
    word = [0] * m
    prev = m
    for g, e in letters:
        if g >= prev:
            raise PresentationSyntaxError(
                "factors must be in strictly descending generator order", line, column)
        word[g] = e
        prev = g
    return tuple(word)
