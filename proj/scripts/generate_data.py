#!/usr/bin/env python3
"""Regenerates the bundled data files under data/.

Outputs are deterministic (fixed RNG seed) and committed to the repo;
rerun only when changing the lexicon or corpus grammar.
"""
import random
import os

OUT = os.path.join(os.path.dirname(__file__), "..", "data")

NOUN_STEMS = """
river forest mountain castle village knight traveler merchant scholar lantern
harbor vessel storm valley meadow shepherd garden tower bridge road
path field stone wall gate door window roof chimney fire
smoke shadow moon star sun sky cloud rain wind snow
winter summer autumn spring morning evening night day dawn dusk
king queen prince soldier farmer baker hunter sailor captain stranger
letter book scroll map candle sword shield banner crown throne
horse wolf raven eagle fox deer rabbit serpent falcon hound
song story secret promise journey battle feast market festival harvest
church temple palace cottage cellar attic stable mill forge tavern
island cliff cave spring stream lake ocean shore desert plain
tree branch leaf root blossom orchard vineyard hedge thorn willow
bell rope chain key lock chest coin jewel mirror cloak
voice whisper echo silence dream memory sorrow hope fear courage
friend enemy neighbor guest servant master apprentice messenger guardian wanderer
city town kingdom empire border province hamlet courtyard plaza fountain
winterberry ember ash flame torch beacon signal watchtower rampart moat
ship anchor sail mast deck cargo crew voyage tide current
teacher student lesson question answer riddle puzzle legend tale rumor
blacksmith carpenter weaver potter miller tailor healer minstrel scribe herald
apple bread honey wine grain barley salt pepper spice herb
mother father daughter son sister brother uncle aunt cousin elder
hand foot heart mind eye ear face hair shoulder finger
""".split()

VERB_STEMS = """
walk carry watch follow guard cross discover gather whisper wander
climb rest study repair paint open close remember visit travel
listen answer call gaze march settle search wait return arrive
depart linger approach observe describe explain promise refuse accept offer
deliver collect protect welcome greet warn obey ignore admire praise
polish sharpen mend fold stack plant water trim harvest store
light guide lead push pull lift drop toss roll turn
enter leave reach touch point shout murmur mutter laugh smile
frown nod wave knock ring echo fade glow shimmer drift
float sail row anchor dock load unload trade barter bargain
count measure weigh record copy sketch carve shape hammer forge
cook bake brew stir pour taste serve share divide join
""".split()

IRREGULAR_VERBS = {
    "sit": ("sat", "sits", "sitting"),
    "stand": ("stood", "stands", "standing"),
    "speak": ("spoke", "speaks", "speaking"),
    "sing": ("sang", "sings", "singing"),
    "hold": ("held", "holds", "holding"),
    "keep": ("kept", "keeps", "keeping"),
    "tell": ("told", "tells", "telling"),
    "find": ("found", "finds", "finding"),
    "build": ("built", "builds", "building"),
    "ride": ("rode", "rides", "riding"),
    "run": ("ran", "runs", "running"),
    "sleep": ("slept", "sleeps", "sleeping"),
    "sweep": ("swept", "sweeps", "sweeping"),
    "bring": ("brought", "brings", "bringing"),
    "seek": ("sought", "seeks", "seeking"),
    "begin": ("began", "begins", "beginning"),
    "forget": ("forgot", "forgets", "forgetting"),
    "wear": ("wore", "wears", "wearing"),
    "grow": ("grew", "grows", "growing"),
    "know": ("knew", "knows", "knowing"),
}

ADJS = """
old young small large bright dark silent ancient golden hidden
distant gentle fierce quiet heavy narrow broad cold warm strange
familiar weary eager hollow pale crimson emerald wooden misty frozen
restless solemn patient clever humble proud bitter sweet rough smooth
steep shallow deep tall short wide thin thick sturdy fragile
brave timid bold cautious graceful clumsy nimble swift slow steady
crooked straight dusty muddy sandy rocky grassy mossy shady sunny
rainy windy snowy foggy cloudy starry moonlit gloomy cheerful dreary
noble loyal honest cunning wicked kindly stern gruff merry somber
rusty shiny polished tarnished faded vivid plain ornate simple grand
empty crowded busy idle lonely peaceful troubled calm wild tame
ripe fresh stale tender crisp soft firm damp dry warm
""".split()

ADVS = """
quickly slowly quietly carefully often never always soon again suddenly
gently bravely eagerly calmly barely nearly truly deeply softly loudly
patiently proudly sadly gladly warmly coldly sternly kindly wearily swiftly
steadily clumsily gracefully silently secretly openly rarely sometimes usually finally
early late yesterday today tomorrow tonight everywhere nowhere somewhere here
there now then twice once almost quite rather very
""".split()

DETS = "the a an this that these those every each some any no another".split()
PRONS = ("he she it they we you i him her them us me his hers theirs mine yours "
         "who whom whose what someone everyone anyone nobody nothing something everything").split()
ADPS = ("in on at by with from to of over under near through across between behind "
        "beyond along around during within toward against beneath above below into onto "
        "upon beside among without despite").split()
CONJS = "and or but nor so yet while because although though if when until since unless whereas after before".split()
PARTS = ["not", "n't", "'s", "'re", "'ll", "'ve", "'d", "'m"]
NUMS = "one two three four five six seven eight nine ten eleven twelve twenty fifty hundred thousand zero".split()
INTJS = "oh ah alas hey hurrah".split()


def verb_forms(stem):
    if stem in IRREGULAR_VERBS:
        past, third, ing = IRREGULAR_VERBS[stem]
    else:
        if stem.endswith("e"):
            past, ing = stem + "d", stem[:-1] + "ing"
        elif stem.endswith("y") and stem[-2] not in "aeiou":
            past, ing = stem[:-1] + "ied", stem + "ing"
        else:
            past, ing = stem + "ed", stem + "ing"
        if stem.endswith(("s", "sh", "ch", "x")):
            third = stem + "es"
        elif stem.endswith("y") and stem[-2] not in "aeiou":
            third = stem[:-1] + "ies"
        else:
            third = stem + "s"
    return [stem, past, third, ing]


def noun_forms(stem):
    if stem.endswith(("s", "sh", "ch", "x")):
        return [stem, stem + "es"]
    if stem.endswith("y") and stem[-2] not in "aeiou":
        return [stem, stem[:-1] + "ies"]
    return [stem, stem + "s"]


def build_lexicon():
    entries = {}

    def add(word, pos):
        entries.setdefault(word, pos)

    for w in DETS:
        add(w, "DET")
    for w in PRONS:
        add(w, "PRON")
    for w in ADPS:
        add(w, "ADP")
    for w in CONJS:
        add(w, "CONJ")
    for w in PARTS:
        add(w, "PART")
    for w in NUMS:
        add(w, "NUM")
    for w in INTJS:
        add(w, "INTJ")
    for w in ADVS:
        add(w, "ADV")
    for w in ADJS:
        add(w, "ADJ")
    for stem in set(NOUN_STEMS):
        for f in noun_forms(stem):
            add(f, "NOUN")
    for stem in set(VERB_STEMS) | set(IRREGULAR_VERBS):
        for f in verb_forms(stem):
            add(f, "VERB")
    # auxiliaries / copulas
    for w in ("is was are were be been being am has have had having do did does "
              "done can could will would shall should may might must").split():
        entries[w] = "VERB"
    return entries


def write_lexicon(lex):
    with open(os.path.join(OUT, "lexicon.tsv"), "w") as f:
        f.write("#lexicon-v1\n")
        for w in sorted(lex):
            f.write(f"{w}\t{lex[w]}\n")


DEP_LABELS = """
acl acl:relcl advcl advmod amod appos aux aux:pass case cc
ccomp clf compound compound:prt conj cop csubj dep det det:predet
discourse dislocated expl fixed flat goeswith iobj list mark nmod
nmod:poss nsubj nsubj:pass nummod obj obl obl:agent orphan parataxis punct
reparandum root vocative xcomp advmod:neg
""".split()


def write_labels():
    assert len(DEP_LABELS) == 45, len(DEP_LABELS)
    with open(os.path.join(OUT, "dep_labels.txt"), "w") as f:
        f.write("#inventory-v1\n")
        for l in DEP_LABELS:
            f.write(l + "\n")


def make_corpus(lex, rng, n_sentences=1600):
    nouns = sorted(w for w, p in lex.items() if p == "NOUN")
    verbs_past = sorted(set(IRREGULAR_VERBS[s][0] for s in IRREGULAR_VERBS)
                        | set(verb_forms(s)[1] for s in VERB_STEMS))
    adjs = sorted(ADJS)
    advs = sorted(set(ADVS) - {"yesterday", "today", "tomorrow", "tonight"})

    def np():
        words = [rng.choice(DETS[:5])]
        for _ in range(rng.choice([0, 0, 1, 1, 2])):
            words.append(rng.choice(adjs))
        words.append(rng.choice(nouns))
        return words

    def pp():
        return [rng.choice(ADPS)] + np()

    def clause():
        words = np()
        if rng.random() < 0.3:
            words.append(rng.choice(advs))
        words.append(rng.choice(verbs_past))
        tail = rng.random()
        if tail < 0.45:
            words += np()
            if rng.random() < 0.5:
                words += pp()
        elif tail < 0.8:
            words += pp()
            if rng.random() < 0.4:
                words += pp()
        else:
            words.append(rng.choice(advs))
            words += pp()
        return words

    sents = []
    for _ in range(n_sentences):
        words = clause()
        if rng.random() < 0.25:
            words += [rng.choice(["and", "but", "while", "because"])] + clause()
        while len(words) < 8:
            words += pp()
        r = rng.random()
        term = "." if r < 0.88 else ("!" if r < 0.95 else "?")
        text = " ".join(words)
        sents.append(text[0].upper() + text[1:] + term)
    # paragraphs of 8 sentences
    lines = []
    for i in range(0, len(sents), 8):
        lines.append(" ".join(sents[i:i + 8]))
    return "\n".join(lines) + "\n"


def write_thesaurus(lex, rng):
    """Closed thesaurus: synonym rings drawn from the lexicon itself, same POS
    and same inflection, so tags are preserved by construction."""
    rows = []

    def rings(words, pos, k=4):
        words = sorted(set(words))
        rng.shuffle(words)
        for i in range(0, len(words) - k + 1, k):
            group = words[i:i + k]
            for w in group:
                syns = [s for s in group if s != w]
                rows.append((w, pos, syns))

    # group strictly by the lexicon's final tag: homographs (a verb form that
    # the lexicon records as a noun, etc.) must ring with their lexicon tag or
    # substitution would not preserve the tag sequence
    for pos in ("NOUN", "VERB", "ADJ", "ADV"):
        rings([w for w, p in lex.items() if p == pos], pos)
    rows.sort()
    with open(os.path.join(OUT, "thesaurus.tsv"), "w") as f:
        for w, pos, syns in rows:
            f.write(f"{w}\t{pos}\t{','.join(syns)}\n")
    return len(rows)


# Out-of-lexicon synonyms. Unknown nouns fall through to the NOUN default and
# -ed/-ing/-ly suffixes keep their tags, so most of these preserve structure;
# the entries marked below map an irregular past to a bare out-of-lexicon word,
# which retags as NOUN and perturbs the structure string.
OPEN_SYNS = {
    ("castle", "NOUN"): ["fortress", "citadel", "stronghold"],
    ("village", "NOUN"): ["settlement", "township"],
    ("traveler", "NOUN"): ["voyager", "nomad", "pilgrim"],
    ("merchant", "NOUN"): ["trader", "peddler", "vendor"],
    ("scholar", "NOUN"): ["academic", "savant"],
    ("storm", "NOUN"): ["tempest", "squall", "gale"],
    ("valley", "NOUN"): ["glen", "dale", "ravine"],
    ("meadow", "NOUN"): ["pasture", "grassland"],
    ("shepherd", "NOUN"): ["herdsman", "drover"],
    ("tower", "NOUN"): ["turret", "spire", "minaret"],
    ("bridge", "NOUN"): ["overpass", "viaduct"],
    ("road", "NOUN"): ["highway", "thoroughfare", "lane"],
    ("stone", "NOUN"): ["boulder", "pebble", "slab"],
    ("fire", "NOUN"): ["blaze", "inferno"],
    ("shadow", "NOUN"): ["silhouette", "outline"],
    ("secret", "NOUN"): ["mystery", "enigma"],
    ("journey", "NOUN"): ["trek", "expedition", "odyssey"],
    ("battle", "NOUN"): ["skirmish", "clash", "conflict"],
    ("feast", "NOUN"): ["banquet", "spread"],
    ("king", "NOUN"): ["monarch", "sovereign", "ruler"],
    ("soldier", "NOUN"): ["warrior", "fighter", "trooper"],
    ("stranger", "NOUN"): ["outsider", "newcomer"],
    ("letter", "NOUN"): ["missive", "dispatch", "note"],
    ("sword", "NOUN"): ["blade", "saber", "rapier"],
    ("horse", "NOUN"): ["steed", "stallion", "mare"],
    ("wolf", "NOUN"): ["predator", "beast"],
    ("fate", "NOUN"): ["fortune", "destiny"],
    ("walked", "VERB"): ["strolled", "ambled", "strode"],
    ("carried", "VERB"): ["hauled", "lugged", "toted"],
    ("watched", "VERB"): ["observed", "eyed", "surveyed"],
    ("followed", "VERB"): ["trailed", "pursued", "shadowed"],
    ("guarded", "VERB"): ["defended", "shielded", "patrolled"],
    ("crossed", "VERB"): ["traversed", "forded"],
    ("discovered", "VERB"): ["uncovered", "unearthed", "detected"],
    ("gathered", "VERB"): ["assembled", "amassed", "collected"],
    ("whispered", "VERB"): ["murmured", "breathed"],
    ("wandered", "VERB"): ["roamed", "rambled", "meandered"],
    ("climbed", "VERB"): ["ascended", "scaled", "mounted"],
    ("rested", "VERB"): ["paused", "reclined", "lounged"],
    ("studied", "VERB"): ["examined", "inspected", "reviewed"],
    ("repaired", "VERB"): ["restored", "patched"],
    ("opened", "VERB"): ["unlocked", "unsealed"],
    ("closed", "VERB"): ["sealed", "shuttered", "latched"],
    ("old", "ADJ"): ["aged", "weathered", "timeworn"],
    ("bright", "ADJ"): ["gleaming", "radiant", "dazzling"],
    ("dark", "ADJ"): ["shadowed", "dimmed", "blackened"],
    ("silent", "ADJ"): ["hushed", "muted", "soundless"],
    ("hidden", "ADJ"): ["concealed", "veiled", "obscured"],
    ("gentle", "ADJ"): ["tender", "mild", "soothing"],
    ("fierce", "ADJ"): ["savage", "ferocious", "untamed"],
    ("weary", "ADJ"): ["exhausted", "drained", "fatigued"],
    ("quickly", "ADV"): ["rapidly", "speedily", "briskly"],
    ("slowly", "ADV"): ["gradually", "unhurriedly"],
    ("quietly", "ADV"): ["noiselessly", "mutedly"],
    ("carefully", "ADV"): ["cautiously", "meticulously"],
    ("suddenly", "ADV"): ["abruptly", "unexpectedly"],
    # tag-changing entries: bare irregular forms retag as NOUN
    ("spoke", "VERB"): ["quoth"],
    ("sang", "VERB"): ["trilled", "chanteth"],
    ("held", "VERB"): ["clasped", "clutcheth"],
}


def write_open_thesaurus():
    with open(os.path.join(OUT, "thesaurus_open.tsv"), "w") as f:
        for (w, pos), syns in sorted(OPEN_SYNS.items()):
            f.write(f"{w}\t{pos}\t{','.join(syns)}\n")


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = random.Random(20240917)
    lex = build_lexicon()
    write_lexicon(lex)
    write_labels()
    corpus = make_corpus(lex, rng)
    with open(os.path.join(OUT, "corpus.txt"), "w") as f:
        f.write(corpus)
    n = write_thesaurus(lex, rng)
    write_open_thesaurus()
    print(f"lexicon: {len(lex)} entries; corpus: {len(corpus.split())} tokens; "
          f"thesaurus: {n} entries")


if __name__ == "__main__":
    main()
