from dataclasses import dataclass, field


@dataclass
class ScoreReport:
    """A metric value with the metadata needed to reproduce it.

    ``metadata`` must be deterministic for fixed inputs and seed;
    ``wall_time`` is the only field allowed to vary between runs.
    A diagram distance between diagrams with different numbers of
    infinite bars is the one case where ``value`` may be infinite.
    """

    metric: str
    value: float
    metadata: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def payload(self) -> dict:
        return {"metric": self.metric, "value": self.value, "metadata": self.metadata}
