"""Seeded synthetic dialog corpora with independent topic and structure signal.

Each dialog draws a topic (which words it uses) and a structural style (how
long it is, how wordy its turns are, how often a speaker rephrases) from
separate random streams, so textual and structural neighbours disagree.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass

from .corpus import Corpus, Dialog

_FILLER = (
    "the a and i you it we that to of is was so well like know mean just "
    "really what there they um uh yeah oh this have do"
).split()


@dataclass(frozen=True)
class Style:
    min_turns: int
    max_turns: int
    words_per_turn: float
    cycle_rate: float


STYLES = (
    Style(38, 90, 5.0, 0.02),
    Style(60, 160, 7.0, 0.08),
    Style(120, 300, 9.0, 0.04),
    Style(200, 509, 6.0, 0.12),
)


def _word(rng: random.Random) -> str:
    return "".join(rng.choices(string.ascii_lowercase, k=rng.randint(4, 9)))


def _vocabularies(rng: random.Random, n_topics: int, topic_size: int, shared_size: int):
    seen: set[str] = set(_FILLER)

    def fresh() -> str:
        while True:
            w = _word(rng)
            if w not in seen:
                seen.add(w)
                return w

    topics = [[fresh() for _ in range(topic_size)] for _ in range(n_topics)]
    shared = [fresh() for _ in range(shared_size)]
    return topics, shared


def _utterance(rng: random.Random, topic: list[str], shared: list[str], length: int) -> list[str]:
    words = []
    for _ in range(max(1, length)):
        r = rng.random()
        if r < 0.35:
            words.append(rng.choice(topic))
        elif r < 0.55:
            words.append(rng.choice(shared))
        else:
            words.append(rng.choice(_FILLER))
    return words


def _rephrase(rng: random.Random, words: list[str]) -> list[str]:
    content = [w for w in words if w not in _FILLER]
    out = content + rng.sample(_FILLER, k=min(len(_FILLER), max(1, len(words) - len(content))))
    rng.shuffle(out)
    return out


def synthetic_dialog(
    dialog_id: str, rng: random.Random, topic: list[str], shared: list[str], style: Style
) -> Dialog:
    n_turns = rng.randint(style.min_turns, style.max_turns)
    speakers = ("A", "B")
    pairs: list[tuple[str, str]] = []
    who = 0
    prev: list[str] | None = None
    repeats_left = 0
    while len(pairs) < n_turns:
        if repeats_left > 0 and prev is not None:
            words = _rephrase(rng, prev)
            repeats_left -= 1
        else:
            length = max(1, round(rng.gauss(style.words_per_turn, style.words_per_turn / 3)))
            words = _utterance(rng, topic, shared, length)
            if rng.random() < style.cycle_rate:
                repeats_left = rng.randint(1, 3)
        pairs.append((speakers[who], " ".join(words)))
        prev = words
        if rng.random() < 0.85:
            who = 1 - who
    return Dialog.from_pairs(dialog_id, pairs)


def synthetic_corpus(
    n_dialogs: int = 50,
    seed: int = 0,
    n_topics: int = 6,
    topic_size: int = 60,
    shared_size: int = 400,
    styles: tuple[Style, ...] = STYLES,
) -> Corpus:
    rng = random.Random(seed)
    topics, shared = _vocabularies(rng, n_topics, topic_size, shared_size)
    topic_rng = random.Random(rng.getrandbits(64))
    style_rng = random.Random(rng.getrandbits(64))
    text_rng = random.Random(rng.getrandbits(64))
    dialogs = []
    for i in range(n_dialogs):
        topic = topics[topic_rng.randrange(n_topics)]
        style = styles[style_rng.randrange(len(styles))]
        dialogs.append(synthetic_dialog(f"d{i:04d}", text_rng, topic, shared, style))
    return Corpus(tuple(dialogs))
