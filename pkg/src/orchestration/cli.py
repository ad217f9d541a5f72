import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.certify.section4 import verify_section4
from src.certify.ten_dim import certify_tenDim
from src.config.settings import settings
from src.models.documents import CertificateDocument, dump_document, load_algebra_document
from src.orchestration import pipelines
from src.orchestration.pipeline_runner import PipelineRunner, to_document
from src.storage.artifact_store import ArtifactStore

logger = logging.getLogger(__name__)

Subcommand = Literal['check-ainfty', 'hochschild', 'ext', 'solve-morphism', 'certify-10dim',
                     'verify-section4', 'run-all']

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class CLIError(Exception):
    pass


class CommandSpec(BaseModel):
    """Validated command line"""
    model_config = ConfigDict(extra='forbid')

    subcommand: Subcommand
    algebra: Optional[str] = None
    input: Optional[str] = None
    output: Optional[str] = None
    workdir: Optional[str] = None
    bounds: Dict[str, int] = Field(default_factory=dict)

    @field_validator('bounds')
    @classmethod
    def validate_bounds(cls, v: Dict[str, int]) -> Dict[str, int]:
        """All bounds positive"""
        bad = [name for name, value in v.items() if value < 1]
        if bad:
            raise ValueError(f"Bounds must be positive: {', '.join(sorted(bad))}")
        return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CLIError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog='ainfty-certify', description="Exact A-infinity and Hochschild certificates")
    parser.add_argument('--workdir', help="Artifact directory (default: AINFTY_WORKDIR)")
    parser.add_argument('--output', help="Certificate path inside the workdir")
    parser.add_argument('--log-level', default=settings.AINFTY_LOG_LEVEL)
    sub = parser.add_subparsers(dest='subcommand', required=True, parser_class=_Parser)

    check = sub.add_parser('check-ainfty', help="A-infinity relations of a catalog or JSON algebra")
    source = check.add_mutually_exclusive_group(required=True)
    source.add_argument('--algebra', help="Catalog key, e.g. lambda1 or truncated_poly(6)")
    source.add_argument('--input', help="AlgebraDocument JSON file")
    check.add_argument('--arity', type=int, default=settings.CHECK_ARITY)

    hh = sub.add_parser('hochschild', help="Mixed-complex identities and HH dimensions")
    hh.add_argument('--algebra', required=True)
    hh.add_argument('--max-weight', type=int, default=settings.SECTION4_MAX_WEIGHT)

    ext = sub.add_parser('ext', help="Ext over k[y]/y^3, H(C) and the obstruction groups")
    ext.add_argument('--depth', type=int, default=settings.RESOLUTION_DEPTH)
    ext.add_argument('--weight-bound', type=int, default=settings.WEIGHT_BOUND)
    ext.add_argument('--periodic-depth', type=int, default=settings.PERIODIC_DEPTH)

    for name, arity in (('solve-morphism', settings.SOLVER_ARITY), ('certify-10dim', settings.CERTIFY_ARITY)):
        cmd = sub.add_parser(name)
        cmd.add_argument('--arity', type=int, default=arity)
        cmd.add_argument('--weight-bound', type=int, default=settings.WEIGHT_BOUND)
        cmd.add_argument('--length-bound', type=int, default=settings.LENGTH_BOUND)

    section = sub.add_parser('verify-section4', help="Kunneth and id (x) B on lambda1 (x) k[eps]")
    section.add_argument('--max-weight', type=int, default=settings.SECTION4_MAX_WEIGHT)

    sub.add_parser('run-all', help="Full acceptance suite")
    return parser


_BOUND_FLAGS = ('arity', 'max_weight', 'depth', 'weight_bound', 'periodic_depth', 'length_bound')


def parse_command(argv: Optional[List[str]] = None) -> CommandSpec:
    args = build_parser().parse_args(argv)
    if args.log_level.upper() not in settings.LOG_LEVELS:
        raise CLIError(f"Invalid log level: {args.log_level}")
    logging.basicConfig(level=getattr(logging, args.log_level.upper()))
    bounds = {flag: getattr(args, flag) for flag in _BOUND_FLAGS if getattr(args, flag, None) is not None}
    return CommandSpec(subcommand=args.subcommand, algebra=getattr(args, 'algebra', None),
                       input=getattr(args, 'input', None), output=args.output,
                       workdir=args.workdir, bounds=bounds)


def execute(command: CommandSpec) -> CertificateDocument:
    """Dispatch to the pipeline and return its certificate"""
    b = command.bounds
    if command.subcommand == 'check-ainfty':
        if command.input:
            algebra = load_algebra_document(Path(command.input).read_text(encoding='utf-8')).to_algebra()
        else:
            algebra = command.algebra
        certificate = pipelines.check_ainfty(algebra, b['arity'])
    elif command.subcommand == 'hochschild':
        certificate = pipelines.hochschild(command.algebra, b['max_weight'])
    elif command.subcommand == 'ext':
        certificate = pipelines.ext(b['depth'], b['weight_bound'], b['periodic_depth'])
    elif command.subcommand == 'solve-morphism':
        certificate = pipelines.solve_morphism(b['arity'], b['weight_bound'], b['length_bound'])
    elif command.subcommand == 'certify-10dim':
        certificate, _ = certify_tenDim(b['arity'], b['weight_bound'], b['length_bound'])
    else:
        certificate = verify_section4(b['max_weight'])
    return to_document(certificate)


def run(command: CommandSpec) -> int:
    """Exit status 0 iff every requested check passed"""
    if command.subcommand == 'run-all':
        summary = PipelineRunner(command.workdir).run_full_pipeline()
        verdict = summary['pipeline_stats']['verdict']
        print(json.dumps({'pipeline': 'run-all', 'verdict': verdict,
                          'files': summary['pipeline_stats']['files_written']}, indent=2))
        return EXIT_PASS if verdict == 'PASS' else EXIT_FAIL
    document = execute(command)
    store = ArtifactStore(command.workdir)
    if command.output:
        path = store.write_text(command.output, dump_document(document))
    else:
        path = store.save_document(document, command.subcommand)
    print(json.dumps({'pipeline': document.pipeline, 'verdict': document.verdict, 'files': [str(path)]}, indent=2))
    return EXIT_PASS if document.verdict == 'PASS' else EXIT_FAIL


def main(argv: Optional[List[str]] = None) -> int:
    try:
        command = parse_command(argv)
        return run(command)
    except Exception as e:
        logger.error(f"Command failed: {str(e)}")
        error = {'error': type(e).__name__, 'message': str(e)}
        required = getattr(e, 'required', None)
        if required:
            error['required'] = required
        witness = getattr(e, 'witness', None)
        if witness:
            error['witness'] = witness
        print(json.dumps(error, indent=2))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
