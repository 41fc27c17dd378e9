from pydantic import BaseModel
from typing import Optional
from utils.logger import get_logger

logger = get_logger(__name__)

# subcommand -> actions it accepts (None when it takes no action word)
COMMANDS = {
    "primitive": {"check", "search", "count"},
    "seq": {"gen", "values", "period"},
    "map": {"build", "check", "classify", "census"},
    "partition": None,
    "examples": {"1", "2", "3"},
}

# fields each (subcommand, action) needs before it can run
REQUIRED = {
    ("primitive", "check"): ("p", "e", "poly"),
    ("primitive", "search"): ("p", "e", "n", "constraint"),
    ("primitive", "count"): ("p", "e", "n"),
    ("seq", "gen"): ("p", "e", "poly"),
    ("seq", "values"): ("p", "e", "poly", "alpha"),
    ("seq", "period"): ("p", "e", "poly"),
    ("map", "build"): ("p", "e"),
    ("map", "check"): ("p", "e", "poly", "map_spec"),
    ("map", "classify"): ("p", "e", "poly", "map_spec"),
    ("map", "census"): ("p", "e", "poly", "alphabet"),
    ("partition", None): ("p", "e", "poly", "alpha", "beta"),
}


class CommandRequest(BaseModel):
    subcommand: str
    action: Optional[str] = None
    p: Optional[int] = None
    e: Optional[int] = None
    n: Optional[int] = None
    poly: Optional[str] = None
    map_spec: Optional[str] = None
    alpha: Optional[str] = None
    beta: Optional[str] = None
    constraint: Optional[str] = None
    level: Optional[int] = None
    alphabet: Optional[int] = None
    seed: Optional[int] = None
    workers: Optional[int] = None
    budget: Optional[int] = None
    output_format: str = "json"

    def validate_request(self):
        logger.debug(f"Validating request: {self.subcommand} {self.action or ''}")
        if self.subcommand not in COMMANDS:
            logger.error(f"Unknown subcommand: {self.subcommand}")
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        actions = COMMANDS[self.subcommand]
        if actions is not None and self.action not in actions:
            raise ValueError(f"{self.subcommand} needs one of {sorted(actions)}, got {self.action!r}")
        if self.output_format not in ("json", "text"):
            raise ValueError(f"output format must be json or text, got {self.output_format!r}")
        missing = [name for name in REQUIRED.get((self.subcommand, self.action), ()) if getattr(self, name) is None]
        if missing:
            logger.error(f"Missing fields for {self.subcommand} {self.action or ''}: {missing}")
            raise ValueError(f"missing required options: {', '.join(missing)}")
        for name in ("level", "alphabet", "workers", "budget", "n"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be positive, got {value}")
        return self


if __name__ == "__main__":
    request = CommandRequest(subcommand="primitive", action="count", p=3, e=2, n=2)
    print(request.validate_request())
