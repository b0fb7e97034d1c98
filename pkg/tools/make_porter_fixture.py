#!/usr/bin/env python3
"""Regenerate the stemmer regression fixture (tests/data/porter/).

The vocabulary is assembled from three deterministic sources: alphabetic
tokens harvested from the Python standard library sources, systematic
root x suffix expansions covering every rule family of the stemmer, and a
hand-picked set of edge-case words. Outputs are produced by the package
stemmer; correctness of the stemmer itself is anchored by the hand-frozen
per-rule example pairs in tests/test_porter.py, and this fixture pins the
full-vocabulary behavior against regressions.
"""

from __future__ import annotations

import re
import sys
import sysconfig
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from stc.porter import porter_stem  # noqa: E402

WORD = re.compile(r"[a-z]+")

ROOTS = """
    act adapt adjust adopt allow analyse anger annoy appear apply arrange
    attach attack attend avoid bake balance band bang bank bargain base
    bat beg behave belong bend bless blind blot boast boil bolt bomb book
    border bore borrow bounce bow box brake branch breathe bruise brush
    bubble bump burn bury buzz calculate call camp care carry carve cause
    challenge change charge chase cheat check cheer chew choke chop claim
    clap clean clear clip close coach coil collect colour comb command
    communicate compare compete complain complete concern confess connect
    consider consist contain continue copy correct cough count cover
    crack crash crawl cross crush cry cure curl curve cycle dam damage
    dance dare decay deceive decide decorate delay delight deliver depend
    describe desert deserve destroy detect develop disagree disappear
    disapprove disarm discover dislike divide double doubt drag drain
    dream dress drip drop drown drum dry dust earn educate embarrass
    employ empty encourage end enjoy enter entertain escape examine excite
    excuse exercise exist expand expect explain explode extend face fade
    fail fancy fasten fax fear fence fetch file fill film fire fit fix
    flap flash float flood flow flower fold follow fool force form found
    frame frighten fry gather gaze glow glue grab grate grease greet grin
    grip groan guarantee guard guess guide hammer hand handle hang happen
    harass harm hate haunt head heal heap heat help hook hop hope hover
    hug hum hunt hurry identify ignore imagine impress improve include
    increase influence inform inject injure instruct intend interest
    interfere interrupt introduce invent invite irritate itch jail jam
    jog join joke judge juggle jump kick kill kiss kneel knit knock knot
    label land last laugh launch learn level license lick lie lighten
    like list listen live load lock long look love man manage march mark
    marry match mate matter measure meddle melt memorise mend mess milk
    mine miss mix moan moor mourn move muddle mug multiply murder nail
    name need nest nod note notice number obey object observe obtain
    occur offend offer open order overflow owe own pack paddle paint park
    part pass paste pat pause peck pedal peel peep perform permit phone
    pick pinch pine place plan plant play please plug point poke polish
    pop possess post pour practise pray preach precede prefer prepare
    present preserve press pretend prevent prick print produce program
    promise protect provide pull pump punch puncture punish push question
    queue race radiate rain raise reach realise receive recognise record
    reduce reflect refuse regret reign reject rejoice relax release rely
    remain remember remind remove repair repeat replace reply report
    reproduce request rescue retire return rhyme rinse risk rob rock roll
    rot rub ruin rule rush sack sail satisfy save saw scare scatter scold
    scorch scrape scratch scream screw scribble scrub seal search
    separate serve settle shade share shave shelter shiver shock shop
    shrug sigh sign signal sin sip ski skip slap slip slow smash smell
    smile smoke snatch sneeze sniff snore snow soak soothe sound spare
    spark sparkle spell spill spoil spot spray sprout squash squeak
    squeal squeeze stain stamp stare start stay steer step stir stitch
    stop store strap strengthen stretch strip stroke stuff subtract
    succeed suck suffer suggest suit supply support suppose surprise
    surround suspect suspend switch talk tame tap taste tease telephone
    tempt terrify test thank thaw tick tickle tie time tip tire touch
    tour tow trace trade train transport trap travel treat tremble trick
    trip trot trouble trust tug tumble turn twist type undress unfasten
    unite unlock unpack untidy use vanish visit wail wait walk wander
    want warm warn wash waste watch water wave weigh welcome whine whip
    whirl whisper whistle wink wipe wish wobble wonder work worry wrap
    wreck wrestle wriggle x-ray yawn yell zip zoom
    relate condition value hesitate digit conform radical differ vile
    analogy vietnam predicate operate feudal decide hope callous formal
    sense electric triple form general oscillate character renew nation
    create motive active produce consume revolve evolve resolve educate
"""

SUFFIXES = [
    "", "s", "es", "ies", "sses", "ss", "ed", "eed", "ing", "y",
    "ational", "tional", "enci", "anci", "izer", "abli", "alli", "entli",
    "eli", "ousli", "ization", "ation", "ator", "alism", "iveness",
    "fulness", "ousness", "aliti", "iviti", "biliti",
    "icate", "ative", "alize", "iciti", "ical", "ful", "ness",
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    "e", "ll",
]

EDGE_CASES = """
    a i is as at be by sky fly dry try cry spy ply shy why day say may
    way pay lay ray bay toy boy joy buy guy agreed feed bleed breed freed
    speed indeed exceed proceed succeed need creed deed greed heed reed
    seed weed bled fled sped wed shed red bed led ted zed abed sing bring
    king ring wing thing spring string nothing anything everything during
    morning evening cunning herring pudding wedding dying lying tying
    vying eyeing dyeing hoeing shoeing canoeing singeing ageing rating
    rated hated mated dated gated skated crated plated slated elated
    debated located vacated narrated operated generated hopped hopping
    stepped stepping planned planning stunned stunning gunned running
    sitting hitting petted petting wetted wetting potted potting dotted
    knotted rotted plotted spotted trotted clotted blotted slotted
    falling filling telling selling spelling smelling dwelling swelling
    rolling polling tolling pulling fulling hissing missing kissing
    passing massing classing glassing grassing pressing stressing
    blessing dressing fizzed buzzed whizzed quizzed jazzed razzed failed
    sailed mailed nailed tailed wailed bailed hailed jailed railed veiled
    filed piled tiled smiled riled wiled beguiled compiled reviled
    happy snappy sloppy floppy choppy puppy guppy hippy zippy dippy
    syzygy pygmy gypsy myth hymn lynx crypt tryst glyph nymph sylph
    rhythm rhythms feebly feebleness controll controlled controlling
    roll rolls rolled rolling droll scroll stroll toll doll poll loll
    probate rate late gate fate hate mate date plate slate state crate
    grate irate ornate innate sedate relate dilate inflate translate
    cease decease release increase decrease grease crease lease please
    tease appease disease lucre massacre mediocre ogre acre involucre
    ably ability abilities possibly possibility responsibility
    capability capabilities probability probabilities stability
    flexibility visibility mobility utility futility senility agility
    fragility hostility fertility humility nobility civility servility
    conformabli orreri oddli earli onli singl
"""


def harvest_stdlib_words(cap: int) -> list[str]:
    stdlib = Path(sysconfig.get_paths()["stdlib"])
    words: set[str] = set()
    for path in sorted(stdlib.glob("*.py")) + sorted(stdlib.glob("*/*.py")):
        try:
            text = path.read_text(encoding="utf-8", errors="ignore").lower()
        except OSError:
            continue
        for match in WORD.findall(text):
            if 3 <= len(match) <= 20:
                words.add(match)
        if len(words) >= cap:
            break
    return sorted(words)[:cap]


def main() -> None:
    out_dir = Path(__file__).resolve().parents[1] / "tests" / "data" / "porter"
    out_dir.mkdir(parents=True, exist_ok=True)

    vocabulary: set[str] = set()
    for root in ROOTS.split():
        root = root.replace("-", "")
        for suffix in SUFFIXES:
            vocabulary.add(root + suffix)
    vocabulary.update(EDGE_CASES.split())
    vocabulary.update(harvest_stdlib_words(cap=14000))
    vocabulary = {w for w in vocabulary if w.isalpha()}

    ordered = sorted(vocabulary)
    (out_dir / "voc.txt").write_text("\n".join(ordered) + "\n", encoding="utf-8")
    (out_dir / "output.txt").write_text(
        "\n".join(porter_stem(w) for w in ordered) + "\n", encoding="utf-8"
    )
    print(f"wrote {len(ordered)} word pairs to {out_dir}")


if __name__ == "__main__":
    main()
