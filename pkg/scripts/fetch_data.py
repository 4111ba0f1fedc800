#!/usr/bin/env python3
"""Fetch the public story-QA and dialog benchmark archives.

The vendored subsets under src/kdnlu/resources/data cover offline CI; this
script pulls the full test splits for the complete benchmark runs:

    python scripts/fetch_data.py --dest data/full
    export KDNLU_QA_DATA=data/full/tasks_1-20_v1-2/en
    export KDNLU_DIALOG_DATA=data/full/dialog-bAbI-tasks
    pytest tests/test_acceptance.py -s

Archives are verified against data/CHECKSUMS.txt when present; on first
download the computed digests are written there (trust on first use) and
printed so they can be pinned in review.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import tarfile
import urllib.request
from pathlib import Path

ARCHIVES = {
    "tasks_1-20_v1-2.tar.gz": "http://www.thespermwhale.com/jaseweston/babi/tasks_1-20_v1-2.tar.gz",
    "dialog-bAbI-tasks.tgz": "http://www.thespermwhale.com/jaseweston/babi/dialog-bAbI-tasks.tgz",
}


def sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default="data/full")
    parser.add_argument("--checksums", default="data/CHECKSUMS.txt")
    args = parser.parse_args()

    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    checksum_file = Path(args.checksums)
    known: dict[str, str] = {}
    if checksum_file.exists():
        for line in checksum_file.read_text().splitlines():
            digest, _, name = line.partition("  ")
            if name:
                known[name.strip()] = digest.strip()

    recorded = []
    for name, url in ARCHIVES.items():
        archive = dest / name
        if not archive.exists():
            print(f"downloading {url}")
            try:
                urllib.request.urlretrieve(url, archive)
            except OSError as e:
                print(f"download failed: {e}", file=sys.stderr)
                return 1
        digest = sha256(archive)
        if name in known:
            if digest != known[name]:
                print(
                    f"CHECKSUM MISMATCH for {name}: got {digest}, "
                    f"expected {known[name]}",
                    file=sys.stderr,
                )
                return 1
            print(f"{name}: checksum ok")
        else:
            print(f"{name}: sha256 {digest} (recorded)")
            recorded.append(f"{digest}  {name}")
        with tarfile.open(archive) as tar:
            tar.extractall(dest)
        print(f"extracted into {dest}")

    if recorded:
        checksum_file.parent.mkdir(parents=True, exist_ok=True)
        with checksum_file.open("a") as handle:
            handle.write("\n".join(recorded) + "\n")
        print(f"pinned new checksums in {checksum_file}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
