#!/usr/bin/env python3
"""Fetch the four small Netlib LP instances used by the benchmark test.

Downloads afiro, adlittle, sc50a, and blend into tests/data/netlib/ and
validates each file by parsing it before saving. Run this once on a machine
with internet access; the test suite skips the desk-scale reduction test
when the files are absent.

Each candidate URL is tried in order until one yields a parseable MPS file.
If every mirror fails for an instance, place any trusted copy of the MPS
file at tests/data/netlib/<name>.mps yourself; the tests only care that the
file parses.
"""

from __future__ import annotations

import gzip
import sys
import urllib.error
import urllib.request
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from pslp.mps import MpsParseError, read_mps  # noqa: E402

INSTANCES = ("afiro", "adlittle", "sc50a", "blend")

URL_TEMPLATES = (
    "https://raw.githubusercontent.com/coin-or-tools/Data-Netlib/master/{name}.mps",
    "https://raw.githubusercontent.com/coin-or-tools/Data-Netlib/master/{upper}.mps",
    "https://raw.githubusercontent.com/coin-or-tools/Data-Netlib/master/{name}.mps.gz",
    "https://www.cuter.rl.ac.uk/Problems/netlib/{name}.mps",
)

DEST = Path(__file__).resolve().parent.parent / "tests" / "data" / "netlib"


def try_fetch(url: str) -> bytes | None:
    req = urllib.request.Request(url, headers={"User-Agent": "pslp-fetch/1.0"})
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            data = resp.read()
    except (urllib.error.URLError, OSError) as exc:
        print(f"  {url}: {exc}")
        return None
    if data[:2] == b"\x1f\x8b":
        try:
            data = gzip.decompress(data)
        except gzip.BadGzipFile:
            return None
    return data


def validate(data: bytes) -> bool:
    for fixed in (False, True):
        try:
            p = read_mps(data, fixed=fixed)
        except MpsParseError:
            continue
        if p.num_rows > 0 and p.num_cols > 0:
            return True
    return False


def main() -> int:
    DEST.mkdir(parents=True, exist_ok=True)
    failures = []
    for name in INSTANCES:
        target = DEST / f"{name}.mps"
        if target.exists():
            print(f"{name}: already present")
            continue
        print(f"{name}:")
        for template in URL_TEMPLATES:
            url = template.format(name=name, upper=name.upper())
            data = try_fetch(url)
            if data is None:
                continue
            if not validate(data):
                print(f"  {url}: downloaded but did not parse as MPS")
                continue
            target.write_bytes(data)
            print(f"  saved {target} ({len(data)} bytes)")
            break
        else:
            failures.append(name)
    if failures:
        print(f"could not fetch: {', '.join(failures)}")
        return 1
    print("all instances present")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
