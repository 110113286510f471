"""Synthetic MEDLINE + WoS exports at the scale of a real topic download.

Defaults give 3,500 documents carrying 180,000 cited references, about
18 MeSH descriptors per document from a ~3,500-term vocabulary and
references drawn with a heavy tail from a pool of journals and papers, so
unique counts land near those of a 3.5k-paper MEDLINE/WoS corpus.  A share
of references points at earlier corpus documents, which gives the bounded
citation network real structure.

    python3 tests/synth.py OUTDIR [--docs N] [--refs N] [--seed S]
"""
from __future__ import annotations

import argparse
import itertools
import random
from pathlib import Path

QUALIFIERS = ("metabolism", "genetics", "pathology", "drug therapy", "physiology", "diagnosis")


def _cum_zipf(n: int, s: float) -> list[float]:
    return list(itertools.accumulate(1.0 / (i + 1) ** s for i in range(n)))


def generate(out: Path, n_docs: int = 3500, n_refs: int = 180_000, seed: int = 2016,
             n_mesh: int = 3600, n_journals: int = 5400, n_papers: int = 110_000,
             mesh_per_doc: int = 18, internal_share: float = 0.04) -> tuple[Path, Path]:
    rng = random.Random(seed)
    out.mkdir(parents=True, exist_ok=True)
    mesh_vocab = ["Alzheimer Disease"] + [f"Descriptor {i:04d}" for i in range(n_mesh - 1)]
    journals = [f"J SYN {i:04d}" for i in range(n_journals)]
    mesh_cum = _cum_zipf(n_mesh, 0.9)
    journal_cum = _cum_zipf(n_journals, 0.95)
    paper_cum = _cum_zipf(n_papers, 0.7)

    # cited-paper pool: each paper has a fixed journal, so repeated draws give identical CR strings
    pool = []
    for i in range(n_papers):
        j = rng.choices(journals, cum_weights=journal_cum)[0]
        pool.append(f"Author{i % 9000} {chr(65 + i % 26)}, {1950 + i % 66}, {j}, V{1 + i % 300}, P{1 + i % 2000}")

    docs = []
    for d in range(n_docs):
        pmid = str(20_000_001 + d)
        year = 1990 + d * 27 // n_docs
        journal = journals[rng.randrange(200)]
        docs.append((pmid, f"Synth{d}, A", f"Synth{d} A", year, journal, str(1 + d % 90), str(100 + d)))

    # split n_refs over documents, each at least one
    cuts = sorted(rng.sample(range(1, n_refs), n_docs - 1))
    per_doc = [b - a for a, b in zip([0] + cuts, cuts + [n_refs])]

    med_lines: list[str] = []
    wos_lines = ["FN Clarivate Analytics Web of Science", "VR 1.0"]
    for d, (pmid, au_wos, au_med, year, journal, vol, page) in enumerate(docs):
        terms = {"Alzheimer Disease"}
        while len(terms) < mesh_per_doc:
            terms.add(rng.choices(mesh_vocab, cum_weights=mesh_cum)[0])
        med_lines += [f"PMID- {pmid}", f"TI  - Synthetic paper {d}", f"DP  - {year} Jan", f"TA  - {journal}", f"AU  - {au_med}"]
        for t in sorted(terms):
            r = rng.random()
            if r < 0.2:
                med_lines.append(f"MH  - *{t}")
            elif r < 0.4:
                med_lines.append(f"MH  - {t}/*{rng.choice(QUALIFIERS)}")
            else:
                med_lines.append(f"MH  - {t}")
        med_lines.append("")

        refs = []
        for _ in range(per_doc[d]):
            if d and rng.random() < internal_share:
                c = docs[rng.randrange(d)]
                refs.append(f"{c[2]}, {c[3]}, {c[4]}, V{c[5]}, P{c[6]}")
            else:
                refs.append(rng.choices(pool, cum_weights=paper_cum)[0])
        wos_lines += ["PT J", f"AU {au_wos}", f"TI Synthetic paper {d}", f"J9 {journal}", f"PY {year}",
                      f"VL {vol}", f"BP {page}", f"TC {rng.randrange(200)}", f"PM {pmid}", f"UT WOS:{int(pmid):015d}"]
        wos_lines.append(f"CR {refs[0]}")
        wos_lines += [f"   {r}" for r in refs[1:]]
        wos_lines.append("ER")
        wos_lines.append("")
    wos_lines.append("EF")

    medline, wos = out / "synth_medline.txt", out / "synth_wos.txt"
    medline.write_text("\n".join(med_lines) + "\n", encoding="utf-8")
    wos.write_text("\n".join(wos_lines) + "\n", encoding="utf-8")
    return medline, wos


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", type=Path)
    ap.add_argument("--docs", type=int, default=3500)
    ap.add_argument("--refs", type=int, default=180_000)
    ap.add_argument("--seed", type=int, default=2016)
    a = ap.parse_args()
    for p in generate(a.out, a.docs, a.refs, a.seed):
        print(p)
