"""Object-name to algebraic-expression maps used when rendering proofs."""

from __future__ import annotations

import logging

log = logging.getLogger(__name__)


class DisplayMap(dict):
    """``dict`` of object name -> expression with a raw-name fallback."""

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        self._warned = set()

    def show(self, name: str) -> str:
        try:
            return self[name]
        except KeyError:
            if name not in self._warned:
                self._warned.add(name)
                log.warning("no display expression for %r; using the raw name", name)
            return name

    def missing(self, objects) -> list[str]:
        return [o for o in objects if o not in self]

    def dumps(self) -> str:
        return "".join(f"{k} = {v}\n" for k, v in self.items())

    @classmethod
    def loads(cls, text: str) -> "DisplayMap":
        out = cls()
        for n, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"display map line {n}: expected 'name = expression'")
            name, expr = line.split("=", 1)
            out[name.strip().lower()] = expr.strip()
        return out
