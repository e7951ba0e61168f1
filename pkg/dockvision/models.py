from typing import Any, ClassVar

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from dockvision.settings import RunConfig, load_config, settings


class BaseCommand(BaseModel):
    """
    Base class of every subcommand. Fields become command line flags, their
     descriptions the `--help` text, and `exec` does the work.
    """

    command_name: ClassVar[str] = None

    config: str | None = Field(
        None,
        description="Path to a yaml / json / toml run config.",
        json_schema_extra={'flag': '--config', 'short': '-c'},
    )
    overrides: list[str] = Field(
        [],
        description="Override a config value, ie --set train.epochs=5. Repeatable.",
        json_schema_extra={'flag': '--set'},
    )

    _run_config: RunConfig | None = PrivateAttr(None)

    model_config = ConfigDict(
        extra='forbid',
        arbitrary_types_allowed=True,
        validate_assignment=True,
        populate_by_name=True,
    )

    @property
    def run_config(self) -> RunConfig:
        """Validated config with the overrides applied, loaded once."""
        if self._run_config is None:
            config = load_config(self.config or settings.config_path, self.overrides)
            if settings.workers is not None:
                config.workers = settings.workers
            self._run_config = config
        return self._run_config

    def exec(self) -> Any:
        raise NotImplementedError
