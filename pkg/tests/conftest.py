from __future__ import annotations

import pytest

from dialogsim.corpus import Corpus, Dialog, parse_corpus

# Switchboard extract used as the worked example for the structural metrics.
PAPER_EXTRACT = """\
=== d1
A: You know right away what you want.
B: I know right away what we, what we want.
B: I keep hearing about it.
B: I keep hearing the advertisements of it.
A: You can't find them.
A: You can't find them.
B: and, i thought i would really miss that.
A: I would, too,
"""

# d0 and d1 share vocabulary, d2 shares none; d0 and d2 have identical structure.
THREE_DIALOGS = """\
=== d0
A: apples bananas cherries
B: dates elderberries figs
=== d1
A: apples bananas
B: cherries dates
A: elderberries figs
B: apples cherries
A: bananas figs
B: dates apples
=== d2
A: grapes kiwis lemons
B: mangoes nectarines oranges
"""


@pytest.fixture
def paper_dialog() -> Dialog:
    return parse_corpus(PAPER_EXTRACT, "transcript")[0]


@pytest.fixture
def three_corpus() -> Corpus:
    return parse_corpus(THREE_DIALOGS, "transcript")


def make_corpus(*dialogs: list[str]) -> Corpus:
    """Corpus from lists of utterances; speakers alternate A/B, ids d0, d1, ..."""
    return Corpus(tuple(
        Dialog.from_pairs(f"d{i}", [("AB"[j % 2], text) for j, text in enumerate(turns)])
        for i, turns in enumerate(dialogs)
    ))


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(line)
