#!/usr/bin/env python
"""Generate a fixture corpus and lemma table for scitopics tests and demos."""

import argparse
import logging
import os
import sys
from pathlib import Path

# Add the project root directory to the Python path
sys.path.insert(0, str(Path(__file__).parent.parent.absolute()))

from src.corpus.documents import write_corpus  # noqa: E402
from tests.test_utils.data_generators import generate_random_documents  # noqa: E402

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

LEMMAS = {
    "options": "option",
    "derivatives": "derivative",
    "banks": "bank",
    "loans": "loan",
    "markets": "market",
    "returns": "return",
    "investors": "investor",
    "firms": "firm",
    "directors": "director",
}


def generate_fixture_corpus(output_dir: str, count: int = 200, seed: int = 0) -> None:
    """Write corpus.jsonl and lemma_table.tsv.

    Args:
        output_dir: The output directory.
        count: The number of documents to generate.
        seed: Random seed.
    """
    os.makedirs(output_dir, exist_ok=True)

    logger.info(f"Generating {count} documents (seed {seed})")
    documents = generate_random_documents(count, seed=seed)
    write_corpus(documents, os.path.join(output_dir, "corpus.jsonl"))

    lemma_path = os.path.join(output_dir, "lemma_table.tsv")
    with open(lemma_path, "w", encoding="utf-8", newline="") as f:
        for token, root in sorted(LEMMAS.items()):
            f.write(f"{token}\t{root}\n")

    logger.info(f"Generated fixture corpus in {output_dir}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Generate a fixture corpus")
    parser.add_argument(
        "--output-dir",
        type=str,
        default="tests/fixtures",
        help="Output directory for the corpus and lemma table",
    )
    parser.add_argument(
        "--count",
        type=int,
        default=200,
        help="Number of documents to generate",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Random seed",
    )

    args = parser.parse_args()

    generate_fixture_corpus(args.output_dir, args.count, args.seed)
