import argparse
import asyncio
import logging
import os
import sys

# Add project root to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import config
from core.errors import NeronkitError
from core.executor import Executor
from core.ideals import ResourceCaps
from core.job import load_job
from core.module_manager import CommandManager
from core.report import build_report, dumps, input_error_report, summary_text
from core.task_graph import TaskGraph

logger = logging.getLogger("neronkit")


def run_job(path: str, caps: ResourceCaps = None, commands_dir: str = None, word_bound: int = None) -> dict:
    """Loads a job, runs its commands and returns the report document."""
    try:
        job = load_job(path, caps, word_bound)
    except (NeronkitError, KeyError, TypeError, ValueError) as e:
        logger.error(f"Cannot load {path}: {e}")
        return input_error_report(path, e)

    manager = CommandManager(commands_dir)
    manager.load_commands()
    graph = TaskGraph.from_job(job)
    asyncio.run(Executor(manager).execute_graph(graph, {"job": job}))
    return build_report(job.name, graph)


def _caps(args):
    if args.max_basis is None and args.max_degree is None:
        return None
    return ResourceCaps(max_basis=args.max_basis if args.max_basis is not None else config.MAX_BASIS,
                        max_degree=args.max_degree if args.max_degree is not None else config.MAX_DEGREE)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="neronkit", description="Exact toolkit for birational group laws "
                                     "and Neron smoothening over a DVR.")
    sub = parser.add_subparsers(dest="action", required=True)
    run = sub.add_parser("run", help="run a job file")
    run.add_argument("job", help="path to the job JSON")
    run.add_argument("--report", help="write the JSON report here")
    run.add_argument("--max-degree", type=int)
    run.add_argument("--max-basis", type=int)
    run.add_argument("--word-bound", type=int)
    run.add_argument("-v", "--verbose", action="store_true")
    sub.add_parser("commands", help="list the available commands")
    args = parser.parse_args(argv)

    logging.basicConfig(format=config.LOG_FORMAT,
                        level=logging.DEBUG if getattr(args, "verbose", False) else logging.INFO)

    if args.action == "commands":
        manager = CommandManager()
        manager.load_commands()
        for d in manager.get_definitions():
            print(f"{d['command']:<18} {d['description']}  [{', '.join(d['params'])}]")
        return config.EXIT_OK

    report = run_job(args.job, _caps(args), word_bound=args.word_bound)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(dumps(report) + "\n")
    print(summary_text(report))
    return report["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
