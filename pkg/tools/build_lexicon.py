#!/usr/bin/env python3
"""Build the packaged lexicon: src/denoiser/data/english_words.tsv.gz.

The file holds exactly 70317 unique lowercase words with Zipf-ranked
frequencies: a hand-written core of real English words first, then
deterministic syllable-built pseudo-words. Regenerating it with this
script is byte-stable (seeded PCG64, fixed iteration order).
"""

from __future__ import annotations

import gzip
from pathlib import Path

import numpy as np

TARGET = 70317
SEED = 20240501
OUT = Path(__file__).resolve().parents[1] / "src" / "denoiser" / "data" / "english_words.tsv.gz"

CORE = """
the be to of and a in that have i it for not on with he as you do at this but
his by from they we say her she or an will my one all would there their what
so up out if about who get which go me when make can like time no just him
know take people into year your good some could them see other than then now
look only come its over think also back after use two how our work first well
way even new want because any these give day most us is was are been has had
were said did having may am shall
man woman child boy girl dog cat bird fish horse cow sheep pig duck hen goat
lion tiger bear wolf fox deer rabbit mouse rat snake frog spider bee ant fly
tree flower grass leaf root branch seed fruit apple orange banana grape lemon
bread milk butter cheese egg meat rice bean corn potato tomato onion salt
sugar water wine beer tea coffee juice soup cake pie
house home room door window wall floor roof stair kitchen garden yard fence
gate road street path bridge river lake sea ocean mountain hill valley field
forest wood stone rock sand soil mud dust air wind rain snow ice fire smoke
cloud sky sun moon star light dark shadow
hand arm leg foot head face eye ear nose mouth tooth tongue hair neck back
chest heart blood bone skin finger thumb knee shoulder
walk walks walked walking run runs running ran jump jumps jumping jumped
swim swims swimming swam ride rides riding rode climb climbs climbing
crawl crawls crawling crawled throw throws throwing threw catch catches
catching caught kick kicks kicking kicked push pushes pushing pushed pull
pulls pulling pulled lift lifts lifting lifted carry carries carrying
carried cut cuts cutting juggle juggles juggling balls ball dance dances
dancing danced sing sings singing sang play plays playing played shoot
shoots shooting shot fence fencing box boxing row rowing surf surfing ski
skiing skate skating dive dives diving dove punch punches punching drum
drums drumming march marches marching stretch stretches stretching brush
brushes brushing type types typing knit knits knitting mop mops mopping
mix mixes mixing pour pours pouring
baby babies crawler crawlers toddler kid kids
board boards cord cords chord chords word words sword swords
truck trucks trump trumps trunk trunks track tracks trick tricks
ship ships shop shops sheep chip chips
write writes writing wrote read reads reading book books paper pen pencil
letter letters card cards sign signs draw draws drawing drew paint paints
painting painted
eat eats eating ate drink drinks drinking drank cook cooks cooking cooked
bake bakes baking baked fry fries frying boil boils boiling wash washes
washing washed clean cleans cleaning cleaned
open opens opening opened close closes closing closed start starts starting
started stop stops stopping stopped turn turns turning turned move moves
moving moved stand stands standing stood sit sits sitting sat sleep sleeps
sleeping slept wake wakes waking woke rest rests resting rested
big small large little long short tall wide narrow thick thin heavy light
fast slow quick early late old young new fresh clean dirty hot cold warm
cool dry wet hard soft loud quiet high low deep shallow near far left right
front top bottom middle inside outside
red blue green yellow black white brown gray pink purple golden silver
one two three four five six seven eight nine ten hundred thousand million
first second third last next
kitten kittens sitting mitten mittens bitten smitten written
dress dresses shirt shirts shoe shoes hat hats coat coats sock socks
glove gloves scarf belt belts ring rings watch watches glass glasses
chair chairs table tables bed beds desk desks lamp lamps clock clocks
phone phones radio radios screen screens wheel wheels engine engines
train trains plane planes boat boats car cars bike bikes bus buses
city cities town towns village villages country countries farm farms
school schools church churches market markets store stores bank banks
hospital hospitals station stations park parks beach beaches island islands
music musics song songs sound sounds voice voices noise noises silence
color colors shape shapes size sizes number numbers name names place places
thing things part parts piece pieces group groups kind kinds type types
dog dogs cat cats bird birds with without within
"""


def core_words() -> list[str]:
    seen = []
    present = set()
    for word in CORE.split():
        if word not in present:
            present.add(word)
            seen.append(word)
    return seen


ONSETS = (
    "b bl br c ch cl cr d dr f fl fr g gl gr h j k l m n p ph pl pr qu r s sc "
    "sh sk sl sm sn sp st str sw t th tr v w wh y z"
).split()
VOWELS = "a e i o u ai ea ee oa oo ou".split()
CODAS = (
    " b ck d g l ll m n nd ng nt p r rd rk rn rt s ss st t th x"
).split(" ")


def pseudo_words(rng: np.random.Generator, needed: int, taken: set[str]) -> list[str]:
    out = []
    while len(out) < needed:
        n_syll = 1 + int(rng.integers(0, 3))
        parts = []
        for s in range(n_syll):
            parts.append(ONSETS[rng.integers(0, len(ONSETS))])
            parts.append(VOWELS[rng.integers(0, len(VOWELS))])
            last = s == n_syll - 1
            if last or rng.random() < 0.3:
                parts.append(CODAS[rng.integers(0, len(CODAS))])
        word = "".join(parts)
        if len(word) < 3 or word in taken:
            continue
        taken.add(word)
        out.append(word)
    return out


def main() -> None:
    core = core_words()
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(SEED)))
    words = core + pseudo_words(rng, TARGET - len(core), set(core))
    assert len(words) == TARGET == len(set(words))
    lines = []
    for rank, word in enumerate(words, start=1):
        freq = max(1, int(5_000_000 / rank**1.07))
        lines.append(f"{word}\t{freq}\n")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    # fixed mtime so the gzip container is byte-stable too
    with open(OUT, "wb") as raw:
        with gzip.GzipFile(fileobj=raw, mode="wb", mtime=0) as gz:
            gz.write("".join(lines).encode("utf-8"))
    print(f"wrote {OUT} ({TARGET} words, {len(core)} real-core)")


if __name__ == "__main__":
    main()
