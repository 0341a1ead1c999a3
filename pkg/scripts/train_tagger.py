#!/usr/bin/env python3
"""Train the bundled POS tagger and freeze its weights into package data.

The training set is the hand-tagged corpus under reqcomplete/nlp/data plus
requirement-style sentences expanded from templates below.  Rerunning this
script reproduces the checked-in weights byte for byte (fixed seeds).
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from reqcomplete.nlp.tagger import PerceptronTagger  # noqa: E402

DATA = ROOT / "src" / "reqcomplete" / "nlp" / "data"

NOUNS = """system model user report interface database network server message
record file sensor device operator document requirement service application
component module controller platform process function display monitor vehicle
train aircraft engine signal protocol channel session transaction account
password certificate backup schedule alarm event error failure response
request policy procedure resource budget inventory product movement history
audit level status configuration parameter value unit test specification
design architecture security safety availability reliability performance
capacity output input storage memory processor queue buffer packet frame page
table column row index key token label category term word sentence analysis
summary notification alert log registry repository directory payload checksum
firmware software hardware administrator technician passenger customer
supplier order invoice payment receipt contract license station terminal
antenna battery circuit display gauge valve pump tank filter conveyor
warehouse shipment route manifest timetable track platform junction depot
transport freight cargo railway locomotive carriage wagon crossing tunnel
browser client gateway proxy firewall router switch cache thread job worker
task metric threshold limit duration interval timeout retry attempt quota
region zone cluster instance snapshot archive manual guide tutorial overview
mission satellite payload telescope probe rover antenna spectrum frequency
bandwidth latency throughput workload dataset corpus vocabulary grammar
parser tokenizer tagger lemma prediction recommendation classifier filter
feature matrix score rank bucket embedding similarity distance threshold
accuracy coverage precision recall baseline experiment repetition split
half portion emergency light door lock camera screen keyboard mouse printer
scanner badge visitor employee manager supervisor shift crew inspection
maintenance repair overhaul upgrade installation deployment rollback efficiency
stability traffic power connectivity integration compliance authentication
authorization encryption validation verification simulation calibration""".split()

PLURALS = """systems models users reports interfaces databases networks
servers messages records files sensors devices operators documents
requirements services applications components modules controllers platforms
processes functions displays monitors vehicles trains aircraft engines
signals protocols channels sessions transactions accounts passwords
certificates backups schedules alarms events errors failures responses
requests policies procedures resources budgets products movements histories
audits levels statuses configurations parameters values units tests
specifications designs operations outputs inputs queues buffers packets
frames pages tables columns rows indexes keys tokens labels categories terms
words sentences analyses summaries notifications alerts logs payloads
checksums administrators technicians passengers customers suppliers orders
invoices payments receipts contracts licenses stations terminals antennas
batteries circuits gauges valves pumps tanks filters conveyors warehouses
shipments routes manifests timetables tracks platforms junctions depots
browsers clients gateways proxies firewalls routers switches caches threads
jobs workers tasks metrics thresholds limits durations intervals timeouts
retries attempts quotas regions zones clusters instances snapshots archives
manuals guides tutorials missions satellites telescopes probes rovers
frequencies workloads datasets corpora vocabularies grammars parsers
tokenizers taggers lemmas predictions recommendations classifiers filters
features matrices scores ranks buckets embeddings similarities distances
baselines experiments repetitions splits halves portions emergencies lights
doors locks cameras screens keyboards printers scanners badges visitors
employees managers supervisors shifts crews inspections repairs overhauls
upgrades installations deployments rollbacks sales""".split()

VERBS = """generate provide support display store send record maintain
monitor process validate transmit log create update delete retrieve accept
reject notify report execute perform control manage handle verify ensure
allow enable disable restrict encrypt decrypt archive restore synchronize
schedule track measure calculate compute detect prevent recover resume
suspend terminate initiate configure install upgrade authenticate authorize
audit review approve publish subscribe broadcast receive forward route
filter parse classify label rank score match compare merge split export
import print scan capture stream buffer cache queue lock unlock guarantee
preserve keep issue raise lower open close start stop run read write load
save check trace flag mask predict recommend prune dedupe mine extract
collect aggregate normalize annotate segment tag lemmatize index search
query fetch crawl download cache respond comply adhere conform react adapt
operate maintain inspect repair replace calibrate test simulate evaluate
assess estimate sample shuffle partition withhold disclose reveal hint
identify discover flag escalate acknowledge resolve mitigate document""".split()

VERBS_3SG = """generates provides supports fails occurs exceeds receives
detects stores sends requires contains includes displays processes works
runs starts stops completes responds monitors handles manages verifies
applies holds remains covers governs extends expires triggers
ensures allows enables encrypts validates transmits logs creates updates
deletes retrieves accepts rejects notifies reports executes performs
controls tracks measures calculates computes prevents recovers resumes
suspends terminates initiates configures installs upgrades authenticates
authorizes audits reviews approves publishes broadcasts forwards routes
filters parses classifies labels ranks scores matches compares merges
splits exports imports prints scans captures streams buffers caches queues
locks unlocks guarantees preserves keeps issues raises lowers opens closes
reads writes loads saves checks traces flags masks predicts recommends
prunes extracts collects aggregates normalizes annotates segments tags
indexes searches queries fetches crawls downloads responds complies
operates inspects repairs replaces calibrates tests simulates evaluates
assesses estimates samples shuffles partitions withholds discloses reveals
hints identifies discovers escalates acknowledges resolves mitigates""".split()

VERBS_PAST = """generated provided supported failed occurred exceeded
received detected stored sent required contained included displayed
processed worked ran started stopped completed responded monitored handled
managed verified ensured allowed enabled encrypted validated transmitted
logged created updated deleted retrieved accepted rejected notified
reported executed performed controlled tracked measured calculated computed
prevented recovered resumed suspended terminated initiated configured
installed upgraded authenticated authorized audited reviewed approved
published broadcast forwarded routed filtered parsed classified labeled
ranked scored matched compared merged split exported imported printed
scanned captured streamed buffered cached queued locked unlocked guaranteed
preserved kept issued raised lowered opened closed read wrote loaded saved
checked traced flagged masked predicted recommended pruned extracted
collected aggregated normalized annotated segmented tagged indexed searched
queried fetched crawled downloaded complied operated inspected repaired
replaced calibrated tested simulated evaluated assessed estimated sampled
shuffled partitioned withheld disclosed revealed hinted identified
discovered escalated acknowledged resolved mitigated sat""".split()

VERBS_PART = """implemented stored generated displayed recorded encrypted
validated transmitted logged created updated deleted processed configured
installed tested defined specified described written designed approved
rejected archived restored synchronized scheduled tracked measured
calculated computed detected prevented recovered suspended terminated
initiated upgraded authenticated authorized audited reviewed published
broadcast received forwarded routed filtered parsed classified labeled
ranked scored matched compared merged exported imported printed scanned
captured streamed buffered cached queued locked unlocked guaranteed
preserved kept issued raised opened closed read loaded saved checked
traced flagged masked predicted recommended pruned extracted collected
aggregated normalized annotated segmented tagged indexed searched queried
fetched crawled downloaded operated inspected repaired replaced calibrated
simulated evaluated assessed estimated sampled shuffled partitioned
withheld disclosed revealed identified discovered resolved mitigated
documented""".split()

ADJS = """new secure primary secondary critical invalid valid current
previous external internal automatic manual digital remote local available
unavailable unusual suspicious peak maximum minimum nominal optional
mandatory persistent temporary graphical main operational redundant robust
reliable stable unstable active inactive idle busy empty full partial
complete incomplete missing novel relevant irrelevant useful useless noisy
clean raw annotated masked hidden visible audible silent rapid slow fast
heavy light strict moderate lenient conservative aggressive final initial
intermediate nightly daily weekly monthly annual regular irregular frequent
rare common uncommon generic specific contextual semantic lexical textual
numeric nominal ordinal binary separable imbalanced balanced synthetic
virtual physical electrical mechanical hydraulic pneumatic thermal optical
acoustic magnetic chemical biological medical legal financial commercial
industrial agricultural environmental municipal federal provincial""".split()

PROPER = """Python Java XML JSON Linux Windows SQL Unicode Ethernet
Bluetooth London Canada Ottawa Wikipedia Toronto Montreal Paris Berlin
Tokyo NASA UNESCO Atlantic Pacific Europe Asia GitHub Apache Oracle
Siemens Boeing Airbus Tesla Intel """.split()

UNITS = "seconds minutes milliseconds hours days weeks meters kilometers bytes megabytes".split()

TEMPLATES = [
    "The_DT {N}_NN shall_MD {V}_VB the_DT {N}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD {V}_VB {Ns}_NNS on_IN {N}_NN {Ns}_NNS ,_COMMA {N}_NN {N}_NN ,_COMMA and_CC {Ns}_NNS {N}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD be_VB {Vn}_VBN in_IN {P}_NNP ._PERIOD",
    "The_DT {N}_NN shall_MD be_VB {Vn}_VBN by_IN the_DT {N}_NN ._PERIOD",
    "A_DT {N}_NN {Vz}_VBZ the_DT {N}_NN of_IN the_DT {N}_NN ._PERIOD",
    "The_DT {J}_JJ {N}_NN shall_MD {V}_VB {J}_JJ {Ns}_NNS ._PERIOD",
    "Each_DT {N}_NN shall_MD {V}_VB a_DT {N}_NN within_IN five_CD {U}_NNS ._PERIOD",
    "The_DT {N}_NN {Vd}_VBD the_DT {N}_NN ._PERIOD",
    "{Ns}_NNS are_VBP {Vn}_VBN by_IN the_DT {N}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD not_RB {V}_VB {Ns}_NNS without_IN {N}_NN ._PERIOD",
    "If_IN the_DT {N}_NN {Vz}_VBZ ,_COMMA the_DT {N}_NN shall_MD {V}_VB an_DT {N}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD {V}_VB the_DT {N}_NN to_TO {V2}_VB the_DT {N}_NN ._PERIOD",
    "Users_NNS may_MD {V}_VB the_DT {N}_NN via_IN the_DT {J}_JJ {N}_NN ._PERIOD",
    "The_DT {N}_NN is_VBZ {J}_JJ and_CC {J2}_JJ ._PERIOD",
    "It_PRP {Vz}_VBZ {Ns}_NNS from_IN the_DT {N}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD {V}_VB an_DT {N}_NN of_IN all_DT {N}_NN {N}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD {V}_VB {N}_NN under_IN {J}_JJ {N}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD {V}_VB with_IN the_DT {N}_NN {N}_NN ._PERIOD",
    "The_DT {N}_NN {Vz}_VBZ when_WRB a_DT {N}_NN {Vz2}_VBZ ._PERIOD",
    "{N}_NN {Ns}_NNS shall_MD be_VB {Vn}_VBN every_DT ten_CD {U}_NNS ._PERIOD",
    "The_DT {N}_NN shall_MD {V}_VB the_DT {N}_NN after_IN a_DT {N}_NN {N}_NN ._PERIOD",
    "The_DT {N}_NN {Vd}_VBD {Ns}_NNS during_IN the_DT {N}_NN ._PERIOD",
    "{Vg}_VBG the_DT {N}_NN requires_VBZ a_DT {J}_JJ {N}_NN ._PERIOD",
    "The_DT {N}_NN provides_VBZ {N}_NN ,_COMMA {N2}_NN ,_COMMA and_CC {N3}_NN ._PERIOD",
    "The_DT {N}_NN shall_MD {V}_VB the_DT {N}_NN before_IN {Vg}_VBG the_DT {N}_NN ._PERIOD",
    "The_DT {Ns}_NNS {Vd}_VBD the_DT {N}_NN ._PERIOD",
    "The_DT {Ns}_NNS {Vd}_VBD ._PERIOD",
    "Some_DT {Ns}_NNS {Vd}_VBD before_IN the_DT {N}_NN {Vd2}_VBD ._PERIOD",
    "The_DT {N}_NN {N2}_NN {Vz}_VBZ ._PERIOD",
    "The_DT {N}_NN {N2}_NN {N3}_NN {Vz}_VBZ to_TO the_DT {N}_NN ._PERIOD",
    "The_DT {N}_NN {N2}_NN {Vz}_VBZ the_DT {N3}_NN ._PERIOD",
]

VERBS_ING = """masking logging monitoring processing running starting
stopping loading saving parsing training testing mining crawling caching
encrypting validating updating reporting filtering scoring ranking
splitting merging tagging indexing searching downloading restoring
scheduling tracking measuring computing detecting recovering configuring
installing reviewing publishing routing scanning capturing streaming
buffering queueing locking predicting recommending pruning extracting
collecting annotating segmenting withholding disclosing operating
inspecting repairing replacing calibrating simulating evaluating sampling
shuffling partitioning documenting""".split()


def parse_line(line: str) -> list[tuple[str, str]]:
    pairs = []
    for item in line.split():
        word, _, tag = item.rpartition("_")
        pairs.append((word, tag))
    return pairs


def generated_sentences(count: int = 900, seed: int = 7) -> list[list[tuple[str, str]]]:
    rng = random.Random(seed)
    pools = {"N": NOUNS, "N2": NOUNS, "N3": NOUNS, "Ns": PLURALS, "V": VERBS,
             "V2": VERBS, "Vz": VERBS_3SG, "Vz2": VERBS_3SG, "Vd": VERBS_PAST,
             "Vd2": VERBS_PAST, "Vn": VERBS_PART, "Vg": VERBS_ING, "J": ADJS,
             "J2": ADJS, "P": PROPER, "U": UNITS}
    out = []
    for _ in range(count):
        template = rng.choice(TEMPLATES)
        filled = template
        for slot, pool in pools.items():
            while "{%s}" % slot in filled:
                filled = filled.replace("{%s}" % slot, rng.choice(pool), 1)
        out.append(parse_line(filled))
    return out


def load_hand_corpus() -> list[list[tuple[str, str]]]:
    sents = []
    for line in (DATA / "tagged_corpus.txt").read_text("utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            sents.append(parse_line(line))
    return sents


CHECKS = [
    ("The system shall generate reports on inventory levels , product movement , and sales history .",
     "DT NN MD VB NNS IN NN NNS COMMA NN NN COMMA CC NNS NN PERIOD"),
    ("The model shall be implemented in Python .",
     "DT NN MD VB VBN IN NNP PERIOD"),
    ("The cat sat .", "DT NN VBD PERIOD"),
    ("The system works .", "DT NN VBZ PERIOD"),
]


def main() -> int:
    hand = load_hand_corpus()
    generated = generated_sentences()
    corpus = hand * 3 + generated  # upweight the curated sentences
    tagger = PerceptronTagger()
    tagger.train(corpus, iterations=8, seed=1)

    out = DATA / "tagger_weights.json.gz"
    tagger.save(out)
    print(f"trained on {len(corpus)} sentences -> {out} ({out.stat().st_size} bytes)")

    ok = True
    for sent, expected in CHECKS:
        got = " ".join(tagger.tag_words(sent.split()))
        status = "ok " if got == expected else "FAIL"
        if got != expected:
            ok = False
        print(f"  [{status}] {sent}\n         got {got}")
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
