import argparse
import logging
import sys

from pydantic import ValidationError

from artaxis.cli.arguments import SweepSpec
from artaxis.cli.commands import cmd_run, cmd_classify, cmd_constants, cmd_estimate_creg, cmd_check_estimates, \
    cmd_mms
from artaxis.cli.config import load_config
from artaxis.cli.sweep import cmd_sweep
from artaxis.oracles.mms import MMS_CASES
from artaxis.util.errors import ArtaxisError

CONFIG_COMMANDS = {
    'run': cmd_run,
    'classify': cmd_classify,
    'constants': cmd_constants,
    'estimate-creg': cmd_estimate_creg,
    'check-estimates': cmd_check_estimates,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='artaxis', description='Attraction-repulsion chemotaxis laboratory')
    subparsers = parser.add_subparsers(dest='command', required=True)
    for name in list(CONFIG_COMMANDS) + ['sweep']:
        sub = subparsers.add_parser(name)
        sub.add_argument('--config', type=str, required=True)
        sub.add_argument('--out', type=str, default=None)
        sub.add_argument('--seed', type=int, default=None)
        if name == 'sweep':
            sub.add_argument('--workers', type=int, default=None)
    mms = subparsers.add_parser('mms')
    mms.add_argument('case', choices=sorted(MMS_CASES))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO)
    try:
        if args.command == 'mms':
            return cmd_mms(args.case)
        config = load_config(args.config)
        overrides = {}
        if args.out is not None:
            overrides['output.directory'] = args.out
        if args.seed is not None:
            overrides['seed'] = args.seed
        if overrides:
            config = config.with_updates(**overrides)
        if args.command == 'sweep':
            return cmd_sweep(SweepSpec.from_config(config, workers=args.workers))
        return CONFIG_COMMANDS[args.command](config)
    except (ArtaxisError, ValidationError, OSError) as e:
        print(f'artaxis {args.command}: {e}', file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
