"""Aho-Corasick automaton over integer symbols.

The automaton is compiled to a complete transition table over the finite
alphabet of the patterns. Every symbol outside that alphabet sends the
automaton back to the root, which keeps the table finite even though the
input alphabet is all of omega.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


class AhoCorasick:
    """Streaming detector for occurrences of any of a finite set of words.

    >>> ac = AhoCorasick([(0, 1), (2, 2)])
    >>> ac.first_match((0, 2, 1))
    >>> ac.first_match((3, 2, 2, 0))
    2
    """

    def __init__(self, patterns: Iterable[Sequence[int]]):
        pats = [tuple(p) for p in patterns]
        if any(len(p) == 0 for p in pats):
            raise ValueError("empty pattern")
        self.patterns = tuple(sorted(set(pats)))
        self.alphabet = frozenset(s for p in self.patterns for s in p)
        self.max_length = max((len(p) for p in self.patterns), default=0)

        goto: list[dict[int, int]] = [{}]
        terminal = [False]
        for p in self.patterns:
            state = 0
            for sym in p:
                nxt = goto[state].get(sym)
                if nxt is None:
                    nxt = len(goto)
                    goto[state][sym] = nxt
                    goto.append({})
                    terminal.append(False)
                state = nxt
            terminal[state] = True

        # BFS order guarantees a state's failure target is finished first.
        fail = [0] * len(goto)
        delta: list[dict[int, int]] = [dict() for _ in goto]
        match = list(terminal)
        order = deque()
        for sym in self.alphabet:
            nxt = goto[0].get(sym, 0)
            delta[0][sym] = nxt
            if nxt:
                order.append(nxt)
        while order:
            state = order.popleft()
            match[state] = match[state] or match[fail[state]]
            for sym in self.alphabet:
                nxt = goto[state].get(sym)
                if nxt is None:
                    delta[state][sym] = delta[fail[state]][sym]
                else:
                    fail[nxt] = delta[fail[state]][sym]
                    delta[state][sym] = nxt
                    order.append(nxt)

        self.delta = delta
        self.match = match

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def step(self, state: int, sym: int) -> int:
        return self.delta[state].get(sym, 0)

    def feed(self, symbols: Iterable[int], state: int = 0) -> tuple[int, int | None]:
        """Run from ``state``; return ``(final_state, offset_of_first_match_end)``."""
        delta, match = self.delta, self.match
        for k, sym in enumerate(symbols):
            state = delta[state].get(sym, 0)
            if match[state]:
                return state, k
        return state, None

    def first_match(self, symbols: Iterable[int]) -> int | None:
        """Index of the last symbol of the earliest-ending occurrence, if any."""
        return self.feed(symbols)[1]
