"""Spot-check client for the LMFDB elliptic curve API, with an on-disk cache.

The transport is any callable ``get(url, params) -> dict`` so tests can use
a recorded fake; the default uses :mod:`urllib`. In offline mode only the
cache is consulted.
"""
from __future__ import annotations

import json
import logging
import os
import threading
import time
import urllib.parse
import urllib.request
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

log = logging.getLogger(__name__)

API_URL = "https://www.lmfdb.org/api/ec_curvedata/"
FIELDS = "Clabel,lmfdb_label,ainvs,modell_images"

Transport = Callable[[str, dict], dict]


@dataclass(frozen=True)
class CurveLookup:
    ainvs: tuple
    label: Optional[str]
    lmfdb_label: Optional[str]
    galois_images: Optional[tuple]
    fetched_at: str

    def to_json(self) -> dict:
        d = asdict(self)
        d["ainvs"] = list(self.ainvs)
        d["galois_images"] = list(self.galois_images) if self.galois_images is not None else None
        return d

    @classmethod
    def from_json(cls, d: dict) -> "CurveLookup":
        gi = d.get("galois_images")
        return cls(
            ainvs=tuple(int(x) for x in d["ainvs"]),
            label=d.get("label"),
            lmfdb_label=d.get("lmfdb_label"),
            galois_images=tuple(gi) if gi is not None else None,
            fetched_at=d["fetched_at"],
        )


def short_ainvs(A: int, B: int) -> tuple:
    return (0, 0, 0, int(A), int(B))


def urllib_transport(url: str, params: dict, timeout: float = 20.0) -> dict:
    full = url + "?" + urllib.parse.urlencode(params, safe=",-")
    req = urllib.request.Request(full, headers={"User-Agent": "entangle-census/0.1"})
    with urllib.request.urlopen(req, timeout=timeout) as resp:
        return json.load(resp)


class LmfdbClient:
    """Rate-limited, cached lookups by a-invariants."""

    def __init__(
        self,
        cache_dir: Optional[Path] = None,
        transport: Optional[Transport] = None,
        offline: bool = False,
        min_interval: float = 1.0,
        retries: int = 3,
        backoff: float = 2.0,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if cache_dir is None:
            root = os.environ.get("ENTANGLE_CACHE_DIR")
            cache_dir = Path(root) / "lmfdb" if root else None
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.transport = transport or urllib_transport
        self.offline = offline
        self.min_interval = min_interval
        self.retries = retries
        self.backoff = backoff
        self._sleep = sleep
        self._lock = threading.Lock()
        self._last = 0.0

    def _cache_path(self, ainvs: Sequence[int]) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        return self.cache_dir / ("_".join(str(int(x)) for x in ainvs) + ".json")

    def cached(self, ainvs: Sequence[int]) -> Optional[CurveLookup]:
        p = self._cache_path(ainvs)
        if p is None or not p.exists():
            return None
        return CurveLookup.from_json(json.loads(p.read_text()))

    def _store(self, rec: CurveLookup) -> None:
        p = self._cache_path(rec.ainvs)
        if p is None:
            return
        p.parent.mkdir(parents=True, exist_ok=True)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(json.dumps(rec.to_json(), sort_keys=True))
        tmp.replace(p)

    def _fetch(self, ainvs: Sequence[int]) -> Optional[dict]:
        params = {
            "ainvs": "li" + ",".join(str(int(x)) for x in ainvs),
            "_format": "json",
            "_fields": FIELDS,
        }
        delay = 1.0
        for attempt in range(self.retries):
            with self._lock:
                wait = self.min_interval - (time.monotonic() - self._last)
                if wait > 0:
                    self._sleep(wait)
                self._last = time.monotonic()
                try:
                    return self.transport(API_URL, params)
                except Exception as exc:  # network errors are soft
                    log.warning("lmfdb request failed (attempt %d): %s", attempt + 1, exc)
            self._sleep(delay)
            delay *= self.backoff
        return None

    def lookup_by_ainvs(self, ainvs: Sequence[int]) -> Optional[CurveLookup]:
        """Label and mod-l image labels for a curve, or ``None`` if unknown/unreachable."""
        ainvs = tuple(int(x) for x in ainvs)
        hit = self.cached(ainvs)
        if hit is not None or self.offline:
            return hit
        payload = self._fetch(ainvs)
        if not payload or not payload.get("data"):
            return None
        row = payload["data"][0]
        imgs = row.get("modell_images")
        rec = CurveLookup(
            ainvs=ainvs,
            label=row.get("Clabel"),
            lmfdb_label=row.get("lmfdb_label"),
            galois_images=tuple(imgs) if imgs is not None else None,
            fetched_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )
        self._store(rec)
        return rec


def lookup_by_ainvs(ainvs: Sequence[int], **kwargs) -> Optional[CurveLookup]:
    return LmfdbClient(**kwargs).lookup_by_ainvs(ainvs)
