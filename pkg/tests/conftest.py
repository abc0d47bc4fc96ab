import random
import sys

import pytest

# deep grammars on long inputs recurse past the default limit
sys.setrecursionlimit(20000)


NT_POOL = ["N0", "N1", "N2", "N3", "N4", "N5", "N6", "N7", "N8", "N9"]
ALPHABET = "abc"


def random_grammar_source(rng: random.Random) -> str:
    """A small random grammar as loader source text.

    Shapes vary from trivially regular to mutually recursive and ambiguous;
    empty alternatives are allowed so nullable chains show up often.
    """
    n_nts = rng.randint(1, 10)
    names = NT_POOL[:n_nts]
    sigma = ALPHABET[: rng.randint(1, 3)]
    lines = [f"start = {names[0]} ;"]
    for name in names:
        alts = []
        for _ in range(rng.randint(1, 3)):
            syms = []
            for _ in range(rng.randint(0, 4)):
                if rng.random() < 0.4:
                    syms.append(rng.choice(names))
                else:
                    syms.append(f"'{rng.choice(sigma)}'")
            alts.append(" ".join(syms))
        lines.append(f"{name} : {' | '.join(alts)} ;")
    return "\n".join(lines) + "\n"


def all_strings(sigma: str, max_len: int):
    """Every token tuple over sigma up to max_len, shortest first."""
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [w + (t,) for w in frontier for t in sigma]
        out.extend(frontier)
    return out


@pytest.fixture
def rng():
    return random.Random(0xD0E)
