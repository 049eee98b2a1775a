"""Work-flow stages shared by the CLI and the scripts: compile, build a world, run."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from relsim.ariel import (
    ArielError,
    RCodeProgram,
    Script,
    compile_recovery,
    decode_rcode,
    encode_rcode,
    extract_constants,
    format_config,
    parse,
    parse_config,
    tokenize,
)
from relsim.ariel.ast import BTConfig
from relsim.ariel.errors import DecodeError
from relsim.sim.scenario import Scenario, ScenarioError, load_scenario
from relsim.sim.world import World


@dataclass
class Diagnostic:
    severity: str  # error | warning
    line: int | None
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{self.severity}: {where}{self.message}"


@dataclass
class CompileArtifacts:
    rcode_path: Path | None
    config_path: Path | None
    diagnostics: list[Diagnostic] = field(default_factory=list)
    script: Script | None = None
    program: RCodeProgram | None = None

    @property
    def ok(self) -> bool:
        return not any(d.severity == "error" for d in self.diagnostics)


def _file_resolver(base: Path):
    def resolve(name: str) -> str | None:
        p = base / name
        return p.read_text(encoding="utf-8") if p.is_file() else None
    return resolve


def translate_file(source_path: Path | str, constants_path: Path | str | None = None
                   ) -> tuple[Script | None, RCodeProgram | None, list[Diagnostic]]:
    """Run constant extraction, lexing, parsing and code generation on a file."""
    source_path = Path(source_path)
    diags: list[Diagnostic] = []
    constants = {}
    if constants_path is not None:
        try:
            constants = extract_constants(Path(constants_path).read_text(encoding="utf-8"))
        except ArielError as exc:
            diags.append(Diagnostic("error", exc.line, f"{constants_path}: {exc.message}"))
            return None, None, diags
        except OSError as exc:
            diags.append(Diagnostic("error", None, f"cannot read constants: {exc}"))
            return None, None, diags
    try:
        text = source_path.read_text(encoding="utf-8")
        script = parse(tokenize(text), constants, _file_resolver(source_path.parent))
    except OSError as exc:
        diags.append(Diagnostic("error", None, f"cannot read source: {exc}"))
        return None, None, diags
    except ArielError as exc:
        diags.append(Diagnostic("error", exc.line, f"{type(exc).__name__}: {exc.message}"))
        return None, None, diags
    for path, line in script.missing_includes:
        diags.append(Diagnostic("warning", line, f"INCLUDE {path!r} not found; relying on supplied constants"))
    return script, compile_recovery(script.recovery), diags


def compile_file(source_path: Path | str, constants_path: Path | str | None = None,
                 out_dir: Path | str | None = None) -> CompileArtifacts:
    source_path = Path(source_path)
    out = Path(out_dir) if out_dir is not None else source_path.parent
    rcode_path = out / (source_path.stem + ".rcod")
    config_path = out / (source_path.stem + ".cfg")
    script, program, diags = translate_file(source_path, constants_path)
    if script is None:
        # a stale binary must not survive a failed compile
        rcode_path.unlink(missing_ok=True)
        return CompileArtifacts(None, None, diags)
    out.mkdir(parents=True, exist_ok=True)
    rcode_path.write_bytes(encode_rcode(program))
    config_path.write_text(format_config(script.configs), encoding="utf-8")
    return CompileArtifacts(rcode_path, config_path, diags, script, program)


def load_recovery(sc: Scenario) -> tuple[RCodeProgram, list[BTConfig]]:
    """Program and BT configuration referenced by a scenario (empty when none)."""
    if sc.script is None:
        return RCodeProgram(), []
    if sc.script.suffix == ".rcod":
        try:
            program = decode_rcode(sc.script.read_bytes())
        except (OSError, DecodeError) as exc:
            raise ScenarioError(f"cannot load {sc.script}: {exc}") from None
        cfg = sc.script.with_suffix(".cfg")
        try:
            configs = parse_config(cfg.read_text(encoding="utf-8")) if cfg.is_file() else []
        except ValueError as exc:
            raise ScenarioError(f"{cfg}: {exc}") from None
        return program, configs
    script, program, diags = translate_file(sc.script, sc.constants)
    if script is None:
        raise ScenarioError(f"{sc.script}: " + "; ".join(str(d) for d in diags))
    return program, script.configs


def build_world(scenario: Scenario | Path | str, seed: int = 0, trace_path: Path | str | None = None) -> World:
    sc = scenario if isinstance(scenario, Scenario) else load_scenario(scenario)
    program, configs = load_recovery(sc)
    return World(sc, program, configs, seed=seed, trace_path=trace_path)


def run_scenario(scenario: Scenario | Path | str, seed: int = 0, until: float | None = None,
                 trace_path: Path | str | None = None) -> World:
    """Build and run a world; ``until`` defaults to the scenario's own horizon."""
    sc = scenario if isinstance(scenario, Scenario) else load_scenario(scenario)
    world = build_world(sc, seed, trace_path)
    try:
        world.run(sc.until if until is None else until)
    finally:
        world.tracer.close()
    return world
