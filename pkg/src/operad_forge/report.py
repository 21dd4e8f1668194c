"""Violation reports returned by the axiom checkers."""


class Violation:
    __slots__ = ("kind", "detail")

    def __init__(self, kind, detail):
        self.kind = kind
        self.detail = detail

    def __repr__(self):
        parts = ", ".join("%s=%r" % kv for kv in sorted(self.detail.items()))
        return "%s(%s)" % (self.kind, parts)


class Report:
    """A list of violations; truthy iff there are none."""

    def __init__(self, subject=""):
        self.subject = subject
        self.violations = []
        self.checked = 0

    def add(self, kind, **detail):
        self.violations.append(Violation(kind, detail))

    def tick(self, k=1):
        self.checked += k

    def merge(self, other):
        self.violations.extend(other.violations)
        self.checked += other.checked
        return self

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    @property
    def first(self):
        return self.violations[0] if self.violations else None

    def kinds(self):
        return sorted({v.kind for v in self.violations})

    def __repr__(self):
        if self.ok:
            return "Report(%s: ok, %d checks)" % (self.subject, self.checked)
        return "Report(%s: %d violations, first %r)" % (
            self.subject, len(self.violations), self.first)
