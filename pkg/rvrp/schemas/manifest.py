from pydantic import BaseModel, Field

from rvrp.core.config import settings


class RunManifest(BaseModel):
    subcommand: str
    config: dict[str, str] = Field(default_factory=dict)
    seed: int
    version: str = settings.APP_VERSION
    outputs: list[str] = Field(default_factory=list)

    def flat(self) -> dict[str, str]:
        values = {
            "subcommand": self.subcommand,
            "seed": str(self.seed),
            "artifact_version": self.version,
            "outputs": ",".join(self.outputs),
        }
        values.update(self.config)
        return values
