"""Independent brute-force oracles used by the tests."""

from collections import deque


def raag_reduce_bfs(word, commute):
    """Minimal representatives reachable by swaps of commuting neighbours and
    cancellation of adjacent inverse pairs.

    ``word`` is a tuple of (generator index, sign); returns the set of
    shortest words in the closure, which is a single shuffle class.
    """
    start = tuple(word)
    seen = {start}
    queue = deque([start])
    best = len(start)
    while queue:
        w = queue.popleft()
        best = min(best, len(w))
        for i in range(len(w) - 1):
            (g, s), (h, t) = w[i], w[i + 1]
            if g == h and s == -t:
                nxt = w[:i] + w[i + 2:]
            elif g != h and commute[g][h]:
                nxt = w[:i] + (w[i + 1], w[i]) + w[i + 2:]
            else:
                continue
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return frozenset(w for w in seen if len(w) == best)
