"""CLI: python -m fixturegen generate --out DIR"""

from __future__ import annotations

import argparse
import json
import sys

from .generate import generate


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="fixturegen")
    sub = parser.add_subparsers(dest="command", required=True)
    gen = sub.add_parser("generate", help="build models and write all fixture files")
    gen.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)
    manifest = generate(args.out)
    print(json.dumps({"model_id": manifest["model_id"],
                      "export_parity": manifest["export_parity"]}))
    return 0


if __name__ == "__main__":
    sys.exit(main())
