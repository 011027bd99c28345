"""Print the model report of every KB in kb_examples/, for both operators.

    python3 scripts/reproduce_examples.py [--dir kb_examples]
"""

import argparse
from pathlib import Path

from mknf_aft import Variant, extract_models, load_kb, wfm
from mknf_aft.approximators import precision_compare

ROOT = Path(__file__).resolve().parent.parent


def show(kb, pair):
    first, second = (",".join(kb.decode(x)) for x in pair)
    return f"({{{first}}}, {{{second}}})"


def report(path: Path) -> None:
    kb = load_kb(path)
    print(f"== {path.name}  |KA| = {kb.size}")
    for variant in Variant:
        wf = wfm(kb, variant)
        print(f"  {variant} well-founded fixpoint {show(kb, wf.partition)}: {wf.kind}"
              + (f" ({wf.reason})" if wf.reason else ""))
        for r in extract_models(kb, variant):
            if r.accepted:
                print(f"    model {show(kb, r.partition)} {r.kind}")
    prec = precision_compare(kb)
    print(f"  phi <=p psi on {prec.checked} pairs: {prec.ok}, psi strictly sharper on {prec.differing}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--dir", type=Path, default=ROOT / "kb_examples")
    args = parser.parse_args()
    for path in sorted(args.dir.glob("*.kb")):
        report(path)


if __name__ == "__main__":
    main()
