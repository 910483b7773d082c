#!/usr/bin/env python3
"""Regenerate src/nimlang/data/seed_ontology.json from the curated tables
below. Run from the repo root:

    python tools/build_seed_ontology.py
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from nimlang import ontology as ont  # noqa: E402

ICON_FILE = "icons/placeholder.png"

# id -> (display name, pos_domain)
CLASSES = {
    "things": ("Things", "noun"),
    "location": ("Location", "noun"),
    "event": ("Event", "noun"),
    "time": ("Time", "noun"),
    "humans": ("Humans", "noun"),
    "animals": ("Animals", "noun"),
    "action": ("Action", "verb"),
    "motion": ("Motion", "verb"),
    "transfer": ("Transfer", "verb"),
}

# template id -> (parent class, ordered slots with allowed molecules)
TEMPLATES = {
    "automobile": ("things", [
        ("category", ["private transport", "public transport", "goods transport"]),
        ("wheels", ["two", "three", "four"]),
    ]),
    "agro": ("things", [
        ("category", ["germinate", "harvested", "processed"]),
    ]),
    "tool": ("things", [
        ("category", ["cut", "dig", "write", "measure"]),
        ("power", ["manual", "machine"]),
    ]),
    "clothing": ("things", [
        ("category", ["upper body", "lower body", "full body"]),
    ]),
    "container": ("things", [
        ("material", ["clay", "metal", "plastic", "fabric"]),
        ("size", ["small", "large"]),
    ]),
    "commercial": ("location", [
        ("purpose", ["business", "trade", "service"]),
    ]),
    "dwelling": ("location", [
        ("purpose", ["live", "rest"]),
    ]),
    "institution": ("location", [
        ("purpose", ["learn", "heal", "govern"]),
    ]),
    "open area": ("location", [
        ("terrain", ["field", "water", "forest"]),
    ]),
    "event climate": ("event", [
        ("category", ["wind", "rain", "heat", "cold"]),
        ("intensity", ["low", "medium", "high"]),
    ]),
    "event social": ("event", [
        ("category", ["celebrate", "mourn", "gather"]),
    ]),
    "temporal": ("time", [
        ("marker", ["day(-1)", "day(0)", "day(+1)", "week(+1)", "month(+1)"]),
    ]),
    "human relationship": ("humans", [
        ("path", ["parent", "child", "sibling", "spouse"]),
        ("gender", ["male", "female"]),
    ]),
    "occupation": ("humans", [
        ("field", ["farm", "trade", "craft", "heal", "teach"]),
    ]),
    "animal domestic": ("animals", [
        ("role", ["milk", "plough", "guard", "ride"]),
    ]),
    "animal wild": ("animals", [
        ("habitat", ["forest", "water", "air"]),
    ]),
    # verbs
    "agri work": ("action", [
        ("task", ["plough", "sow", "weed", "harvest", "water crop"]),
    ]),
    "craft work": ("action", [
        ("task", ["build", "repair", "weave", "forge"]),
    ]),
    "travel": ("motion", [
        ("manner", ["walk", "ride", "drive", "sail"]),
    ]),
    "trade act": ("transfer", [
        ("direction", ["give", "take"]),
        ("medium", ["money", "goods"]),
    ]),
    "communicate": ("transfer", [
        ("channel", ["speak", "write", "signal"]),
    ]),
}

VARIABLE_NAMES = {
    "category": "Category", "wheels": "Wheels", "power": "Power",
    "material": "Material", "size": "Size", "purpose": "Purpose",
    "terrain": "Terrain", "intensity": "Intensity", "marker": "Marker",
    "path": "Path", "gender": "Gender", "field": "Field", "role": "Role",
    "habitat": "Habitat", "task": "Task", "manner": "Manner",
    "direction": "Direction", "medium": "Medium", "channel": "Channel",
}

# lemma -> (pos, sc, st, [(sv, [sm, ...]), ...])
CONCEPTS = {
    # things / automobile
    "motorcycle": ("noun", "things", "automobile",
                   [("category", ["private transport"]), ("wheels", ["two"])]),
    "bicycle": ("noun", "things", "automobile",
                [("category", ["private transport"]), ("wheels", ["two"])]),
    "rickshaw": ("noun", "things", "automobile",
                 [("category", ["public transport"]), ("wheels", ["three"])]),
    "bus": ("noun", "things", "automobile",
            [("category", ["public transport"]), ("wheels", ["four"])]),
    "truck": ("noun", "things", "automobile",
              [("category", ["goods transport"]), ("wheels", ["four"])]),
    "tractor": ("noun", "things", "automobile",
                [("category", ["goods transport"]), ("wheels", ["four"])]),
    # things / agro
    "seed": ("noun", "things", "agro", [("category", ["germinate"])]),
    "grain": ("noun", "things", "agro", [("category", ["harvested"])]),
    "wheat": ("noun", "things", "agro", [("category", ["harvested"])]),
    "rice": ("noun", "things", "agro", [("category", ["harvested"])]),
    "cotton": ("noun", "things", "agro", [("category", ["harvested"])]),
    "flour": ("noun", "things", "agro", [("category", ["processed"])]),
    # things / tool
    "knife": ("noun", "things", "tool", [("category", ["cut"]), ("power", ["manual"])]),
    "axe": ("noun", "things", "tool", [("category", ["cut"]), ("power", ["manual"])]),
    "shovel": ("noun", "things", "tool", [("category", ["dig"]), ("power", ["manual"])]),
    "pen": ("noun", "things", "tool", [("category", ["write"]), ("power", ["manual"])]),
    "scale": ("noun", "things", "tool", [("category", ["measure"]), ("power", ["manual"])]),
    "pump": ("noun", "things", "tool", [("category", ["dig"]), ("power", ["machine"])]),
    # things / clothing
    "shirt": ("noun", "things", "clothing", [("category", ["upper body"])]),
    "sari": ("noun", "things", "clothing", [("category", ["full body"])]),
    "trousers": ("noun", "things", "clothing", [("category", ["lower body"])]),
    # things / container
    "pot": ("noun", "things", "container", [("material", ["clay"]), ("size", ["small"])]),
    "drum": ("noun", "things", "container", [("material", ["metal"]), ("size", ["large"])]),
    "bottle": ("noun", "things", "container", [("material", ["plastic"]), ("size", ["small"])]),
    "sack": ("noun", "things", "container", [("material", ["fabric"]), ("size", ["large"])]),
    # location
    "market": ("noun", "location", "commercial", [("purpose", ["business"])]),
    "shop": ("noun", "location", "commercial", [("purpose", ["business"])]),
    "bazaar": ("noun", "location", "commercial", [("purpose", ["trade"])]),
    "bank": ("noun", "location", "commercial", [("purpose", ["service"])]),
    "house": ("noun", "location", "dwelling", [("purpose", ["live"])]),
    "hut": ("noun", "location", "dwelling", [("purpose", ["live"])]),
    "inn": ("noun", "location", "dwelling", [("purpose", ["rest"])]),
    "school": ("noun", "location", "institution", [("purpose", ["learn"])]),
    "hospital": ("noun", "location", "institution", [("purpose", ["heal"])]),
    "office": ("noun", "location", "institution", [("purpose", ["govern"])]),
    "farm": ("noun", "location", "open area", [("terrain", ["field"])]),
    "field": ("noun", "location", "open area", [("terrain", ["field"])]),
    "river": ("noun", "location", "open area", [("terrain", ["water"])]),
    "pond": ("noun", "location", "open area", [("terrain", ["water"])]),
    "forest": ("noun", "location", "open area", [("terrain", ["forest"])]),
    # event
    "typhoon": ("noun", "event", "event climate",
                [("category", ["wind"]), ("intensity", ["high"])]),
    "storm": ("noun", "event", "event climate",
              [("category", ["wind"]), ("intensity", ["high"])]),
    "rain": ("noun", "event", "event climate",
             [("category", ["rain"]), ("intensity", ["medium"])]),
    "flood": ("noun", "event", "event climate",
              [("category", ["rain"]), ("intensity", ["high"])]),
    "drought": ("noun", "event", "event climate",
                [("category", ["heat"]), ("intensity", ["high"])]),
    "wedding": ("noun", "event", "event social", [("category", ["celebrate"])]),
    "festival": ("noun", "event", "event social", [("category", ["celebrate"])]),
    "funeral": ("noun", "event", "event social", [("category", ["mourn"])]),
    "fair": ("noun", "event", "event social", [("category", ["gather"])]),
    # time
    "tomorrow": ("noun", "time", "temporal", [("marker", ["day(+1)"])]),
    "yesterday": ("noun", "time", "temporal", [("marker", ["day(-1)"])]),
    "today": ("noun", "time", "temporal", [("marker", ["day(0)"])]),
    # humans / kinship (ordered multi-molecule paths)
    "mother": ("noun", "humans", "human relationship",
               [("path", ["parent"]), ("gender", ["female"])]),
    "father": ("noun", "humans", "human relationship",
               [("path", ["parent"]), ("gender", ["male"])]),
    "sister": ("noun", "humans", "human relationship",
               [("path", ["sibling"]), ("gender", ["female"])]),
    "brother": ("noun", "humans", "human relationship",
                [("path", ["sibling"]), ("gender", ["male"])]),
    "daughter": ("noun", "humans", "human relationship",
                 [("path", ["child"]), ("gender", ["female"])]),
    "son": ("noun", "humans", "human relationship",
            [("path", ["child"]), ("gender", ["male"])]),
    "wife": ("noun", "humans", "human relationship",
             [("path", ["spouse"]), ("gender", ["female"])]),
    "husband": ("noun", "humans", "human relationship",
                [("path", ["spouse"]), ("gender", ["male"])]),
    "grandfather": ("noun", "humans", "human relationship",
                    [("path", ["parent", "parent"]), ("gender", ["male"])]),
    "grandmother": ("noun", "humans", "human relationship",
                    [("path", ["parent", "parent"]), ("gender", ["female"])]),
    "nephew": ("noun", "humans", "human relationship",
               [("path", ["sibling", "child"]), ("gender", ["male"])]),
    "niece": ("noun", "humans", "human relationship",
              [("path", ["sibling", "child"]), ("gender", ["female"])]),
    "uncle": ("noun", "humans", "human relationship",
              [("path", ["parent", "sibling"]), ("gender", ["male"])]),
    "aunt": ("noun", "humans", "human relationship",
             [("path", ["parent", "sibling"]), ("gender", ["female"])]),
    # humans / occupation
    "farmer": ("noun", "humans", "occupation", [("field", ["farm"])]),
    "trader": ("noun", "humans", "occupation", [("field", ["trade"])]),
    "blacksmith": ("noun", "humans", "occupation", [("field", ["craft"])]),
    "doctor": ("noun", "humans", "occupation", [("field", ["heal"])]),
    "teacher": ("noun", "humans", "occupation", [("field", ["teach"])]),
    # animals
    "cow": ("noun", "animals", "animal domestic", [("role", ["milk"])]),
    "goat": ("noun", "animals", "animal domestic", [("role", ["milk"])]),
    "buffalo": ("noun", "animals", "animal domestic", [("role", ["plough"])]),
    "dog": ("noun", "animals", "animal domestic", [("role", ["guard"])]),
    "horse": ("noun", "animals", "animal domestic", [("role", ["ride"])]),
    "tiger": ("noun", "animals", "animal wild", [("habitat", ["forest"])]),
    "fish": ("noun", "animals", "animal wild", [("habitat", ["water"])]),
    "bird": ("noun", "animals", "animal wild", [("habitat", ["air"])]),
    # verbs
    "cultivate": ("verb", "action", "agri work", [("task", ["plough"])]),
    "plough": ("verb", "action", "agri work", [("task", ["plough"])]),
    "sow": ("verb", "action", "agri work", [("task", ["sow"])]),
    "weed": ("verb", "action", "agri work", [("task", ["weed"])]),
    "harvest": ("verb", "action", "agri work", [("task", ["harvest"])]),
    "irrigate": ("verb", "action", "agri work", [("task", ["water crop"])]),
    "construct": ("verb", "action", "craft work", [("task", ["build"])]),
    "repair": ("verb", "action", "craft work", [("task", ["repair"])]),
    "weave": ("verb", "action", "craft work", [("task", ["weave"])]),
    "forge": ("verb", "action", "craft work", [("task", ["forge"])]),
    "wander": ("verb", "motion", "travel", [("manner", ["walk"])]),
    "migrate": ("verb", "motion", "travel", [("manner", ["walk"])]),
    "gallop": ("verb", "motion", "travel", [("manner", ["ride"])]),
    "navigate": ("verb", "motion", "travel", [("manner", ["sail"])]),
    "purchase": ("verb", "transfer", "trade act",
                 [("direction", ["take"]), ("medium", ["money"])]),
    "bargain": ("verb", "transfer", "trade act",
                [("direction", ["take"]), ("medium", ["money"])]),
    "donate": ("verb", "transfer", "trade act",
               [("direction", ["give"]), ("medium", ["goods"])]),
    "borrow": ("verb", "transfer", "trade act",
               [("direction", ["take"]), ("medium", ["goods"])]),
    "lend": ("verb", "transfer", "trade act",
             [("direction", ["give"]), ("medium", ["goods"])]),
    "announce": ("verb", "transfer", "communicate", [("channel", ["speak"])]),
    "inscribe": ("verb", "transfer", "communicate", [("channel", ["write"])]),
    "telegraph": ("verb", "transfer", "communicate", [("channel", ["signal"])]),
}


def build() -> ont.Ontology:
    classes = {}
    icon_manifest = {ont.PLACEHOLDER_ICON: ICON_FILE}
    for cid, (name, dom) in CLASSES.items():
        icon = f"icon:{cid}"
        icon_manifest[icon] = ICON_FILE
        classes[cid] = ont.SemanticClass(cid, name, dom, icon)

    templates = {}
    variables = {}
    molecules = {}
    constraints = {}
    for tid, (parent, slots) in TEMPLATES.items():
        icon = f"icon:{tid}"
        icon_manifest[icon] = ICON_FILE
        templates[tid] = ont.SemanticTemplate(
            tid, parent, icon, tuple(sv for sv, _ in slots))
        for sv, allowed in slots:
            variables[sv] = ont.SemanticVariable(sv, VARIABLE_NAMES[sv])
            for sm in allowed:
                if sm not in molecules:
                    micon = f"icon:{sm}"
                    icon_manifest[micon] = ICON_FILE
                    molecules[sm] = ont.SemanticMolecule(sm, sm.title(), micon)
            constraints[(tid, sv)] = ont.EntailmentConstraint(tid, sv, frozenset(allowed))

    concepts = {}
    for lemma, (pos, sc, st, expl) in CONCEPTS.items():
        concepts[(lemma, pos)] = ont.ConceptEntry(
            lemma=lemma, pos=pos, sc=sc, st=st,
            explication=tuple((sv, tuple(sms)) for sv, sms in expl))

    return ont.Ontology(
        version=1,
        classes=classes,
        templates=templates,
        variables=variables,
        molecules=molecules,
        constraints=constraints,
        concepts=concepts,
        icon_manifest=icon_manifest,
    )


def main():
    o = build()
    report = ont.validate(o)
    if not report.ok:
        for v in report:
            print(f"{v.entity_id}: {v.rule}: {v.message}", file=sys.stderr)
        sys.exit(1)
    out = Path(__file__).resolve().parents[1] / "src" / "nimlang" / "data" / "seed_ontology.json"
    out.write_text(ont.canonical_json(o), encoding="utf-8")
    s = ont.stats(o)
    print(f"wrote {out}")
    print(f"nouns: {s.noun}, verbs: {s.verb}, ideographs: {s.ideographs}")


if __name__ == "__main__":
    main()
