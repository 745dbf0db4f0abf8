"""Regenerate the bundled synthetic fixture under tests/data/fixture/.

    python scripts/make_fixture.py [--seed 7]
"""

import argparse
from pathlib import Path

from turingnet.synthetic import dblp_fixture, write_fixture

ROOT = Path(__file__).resolve().parents[1]

CONFIG = """\
[pipeline]
inputs = corpus.jsonl
format = jsonl
laureates = laureates.txt
geocode = geocode.csv
affiliations = affiliations.csv
clique_guard = 500
null_trials = 100
rng_seed = 20200101
measures = degree,closeness,betweenness,eigenvector,load
indicators = n_papers,n_citations,h_index
top_k = 11
fig3_stat = mean
output_dir = out
"""


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", type=Path, default=ROOT / "tests" / "data" / "fixture")
    args = ap.parse_args()
    info = write_fixture(args.out, args.seed)
    (args.out / "pipeline.ini").write_text(CONFIG, encoding="utf-8")
    (args.out / "dblp_sample.xml").write_bytes(dblp_fixture())
    print(f"{info['n_papers']} papers, {info['n_scholars']} scholars -> {args.out}")


if __name__ == "__main__":
    main()
