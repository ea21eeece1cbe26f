#!/usr/bin/env python3
"""Regenerates tests/data/hyphen_de.txt.

Composes German words from single-syllable morphemes (prefix + stem
[+ stem] [+ suffix]). Stems and suffixes are consonant-initial and every
morpheme is one syllable, so the syllable boundaries are exactly the
morpheme joints. Deterministic: fixed seed, sorted inventory.
"""

import random

PREFIXES = ["ver", "zer", "ent", "vor", "auf", "aus", "ein", "mit", "nach",
            "weg", "hin", "her", "bei", "um", "ab", "an", "zu", "durch"]
STEMS = ["fahrt", "gang", "kauf", "lauf", "berg", "burg", "dorf", "fall",
         "gold", "grund", "hand", "haus", "herz", "hof", "holz", "hund",
         "kind", "korb", "kopf", "kraft", "land", "luft", "markt", "mond",
         "mund", "nacht", "pfad", "rand", "ring", "sand", "schiff", "schlag",
         "stadt", "stein", "sturm", "tag", "tal", "tisch", "turm", "wald",
         "wand", "welt", "werk", "wind", "wolf", "wort", "zaun", "zelt",
         "zug", "bach", "ball", "baum", "bild", "blatt", "brief", "bruch",
         "buch", "dach", "dienst", "druck", "durst", "fest", "film", "fisch",
         "flug", "frost", "frucht", "geist", "glanz", "glueck", "gras",
         "griff", "hang", "hemd", "herbst", "herd", "kampf", "kern", "klang",
         "kleid", "knecht", "krieg", "kunst", "lärm", "laub", "licht",
         "lied", "lohn", "markt", "mast", "mehl", "milch", "mut", "netz",
         "ort", "park", "pfand", "platz", "punkt", "rad", "rast", "raum",
         "recht", "rest", "ruhm", "saal", "saft", "salz", "schatz", "schnee",
         "schuh", "schutz", "sieg", "sohn", "spiel", "sport", "staub",
         "stern", "stoff", "strand", "streit", "strom", "stück", "takt",
         "tanz", "teich", "teil", "thron", "tier", "ton", "tor", "traum",
         "trost", "tuch", "volk", "wachs", "weg", "wein", "wert", "wild",
         "wunsch", "zahl", "zahn", "zeit", "ziel", "zorn", "zweig"]
SUFFIXES = ["bar", "los", "sam", "tum", "schaft", "lich", "ling", "nis",
            "voll", "haft"]

SEP = "·"


def main():
    rng = random.Random(20210108)
    stems = sorted(set(STEMS))
    words = {}
    # prefix + stem
    for p in PREFIXES:
        for s in stems:
            words.setdefault(p + s, [p, s])
    # stem + stem compounds
    for a in stems:
        for b in stems:
            if a != b:
                words.setdefault(a + b, [a, b])
    # stem + suffix and prefix + stem + suffix
    for s in stems:
        for suf in SUFFIXES:
            words.setdefault(s + suf, [s, suf])
    for p in PREFIXES[:8]:
        for s in stems[:40]:
            for suf in SUFFIXES[:4]:
                words.setdefault(p + s + suf, [p, s, suf])

    picked = rng.sample(sorted(words), 2000)
    with open("tests/data/hyphen_de.txt", "w", encoding="utf-8") as out:
        out.write("# 2000 composed German words; syllables separated by U+00B7\n")
        for w in picked:
            out.write(SEP.join(words[w]) + "\n")
    print("wrote", len(picked), "words")


if __name__ == "__main__":
    main()
