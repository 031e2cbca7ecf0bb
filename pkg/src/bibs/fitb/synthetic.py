"""Seeded generator of short caption-like sentences.

Subjects, activities and places are coupled (skiers end up on slopes,
buses on streets) and verbs agree in number with the subject, so the words
on both sides of a blank constrain what belongs in it.
"""

from __future__ import annotations

import random
from typing import Iterator

_PEOPLE = (["man", "woman", "boy", "girl", "person", "skier", "surfer"],
           ["men", "women", "boys", "girls", "people", "skiers", "surfers"])
_ANIMALS = (["dog", "cat", "horse", "bird", "giraffe"],
            ["dogs", "cats", "horses", "birds", "giraffes"])
_VEHICLES = (["bus", "train", "truck", "plane"],
             ["buses", "trains", "trucks", "planes"])

# (subject group, allowed subject indices or None for all, activities, places)
_SCENES = [
    (_PEOPLE, [0, 1, 2, 3, 4, 5], ["skiing down", "riding skis down", "standing on top of"],
     ["a snow covered slope", "a snowy hill", "a ski slope"]),
    (_PEOPLE, [0, 1, 2, 3, 4, 6], ["riding a wave", "surfing a wave", "paddling a surfboard"],
     ["in the ocean", "on a sunny day", "near the shore"]),
    (_PEOPLE, [0, 1, 2, 3, 4], ["riding a skateboard", "doing a trick on a skateboard"],
     ["in a park", "on a ramp", "down a city street"]),
    (_PEOPLE, [0, 1, 2, 3, 4], ["flying a kite", "throwing a frisbee"],
     ["on the beach", "in a grassy field", "in a park"]),
    (_PEOPLE, [0, 1, 2, 3, 4], ["eating a sandwich", "eating a slice of pizza", "holding a cup of coffee"],
     ["at a table", "in a kitchen", "in a restaurant"]),
    (_PEOPLE, [0, 1, 4], ["talking on a cell phone", "holding an umbrella"],
     ["on a city street", "in the rain", "next to a building"]),
    (_ANIMALS, [0, 1], ["laying on", "sleeping on", "sitting on"],
     ["a bed", "a couch", "a wooden bench"]),
    (_ANIMALS, [0], ["playing with a frisbee", "running with a ball", "catching a frisbee"],
     ["in the grass", "on the beach", "in a grassy field"]),
    (_ANIMALS, [2, 4], ["grazing", "standing", "walking"],
     ["in a grassy field", "near some trees", "in an enclosure"]),
    (_ANIMALS, [3], ["sitting on a branch", "perched on a branch", "standing on a rock"],
     ["of a tree", "near the water", "in the sun"]),
    (_VEHICLES, [0, 2], ["parked", "driving", "stopped"],
     ["on the side of a street", "down a city street", "at a bus stop"]),
    (_VEHICLES, [1], ["traveling down", "pulling into", "stopped at"],
     ["the tracks", "a train station", "a platform"]),
    (_VEHICLES, [3], ["flying over", "parked on", "taking off from"],
     ["a runway", "the ocean", "an airport"]),
]

_ADJECTIVES = {
    id(_PEOPLE): ["young", "old", "little", "smiling"],
    id(_ANIMALS): ["black", "white", "brown", "small", "large"],
    id(_VEHICLES): ["red", "white", "blue", "large", "double decker"],
}


def sentence(rng: random.Random) -> list[str]:
    group, subjects, activities, places = rng.choice(_SCENES)
    idx = rng.choice(subjects)
    plural = rng.random() < 0.3
    noun = group[1][idx] if plural else group[0][idx]
    words = []
    if plural:
        words += rng.choice([["two"], ["some"], ["a", "group", "of"], ["three"]])
    else:
        words += rng.choice([["a"], ["the"]])
    if rng.random() < 0.4:
        words += rng.choice(_ADJECTIVES[id(group)]).split()
    words.append(noun)
    words.append("are" if plural else "is")
    words += rng.choice(activities).split()
    words += rng.choice(places).split()
    return words


def generate(count: int, seed: int = 0) -> list[list[str]]:
    """``count`` tokenized sentences, deterministic in ``seed``."""
    rng = random.Random(seed)
    return [sentence(rng) for _ in range(count)]


def iter_lines(count: int, seed: int = 0) -> Iterator[str]:
    for words in generate(count, seed):
        yield " ".join(words)
