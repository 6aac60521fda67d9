from typing import NamedTuple


class Violation(NamedTuple):
    kind: str
    subject: tuple
    detail: str = ""

    def to_dict(self):
        return {"kind": self.kind, "subject": list(self.subject), "detail": self.detail}
