from __future__ import annotations

import argparse
from typing import List, Optional

from probnet_v1.logging_config import get_logger
from probnet_v1.reports import load_report, save_report
from probnet_v1.scripts import smoke_pipeline

logger = get_logger(__name__)


def main(argv: Optional[List[str]] = None) -> None:
    parser = argparse.ArgumentParser(
        prog="probnet-smoke",
        description="Run reference pipelines over the shipped knowledge bases.",
    )
    parser.add_argument(
        "scenario",
        nargs="?",
        default="students",
        choices=list(smoke_pipeline.SCENARIOS.keys()),
        help="Pipeline to run (default: students)",
    )
    parser.add_argument(
        "--save",
        help="Optional path to save the pipeline records as JSON lines.",
    )
    parser.add_argument(
        "--load",
        help="Summarize previously saved records instead of running a pipeline.",
    )
    args = parser.parse_args(argv)
    if args.load:
        logger.info("Loading records from %s", args.load)
        try:
            records = load_report(args.load)
            smoke_pipeline.summarize_records("loaded", records)
        except Exception:
            logger.exception("Failed to load records %s", args.load)
            raise
        return

    logger.info("Starting probnet-smoke scenario=%s", args.scenario)
    try:
        outputs = smoke_pipeline.run_named_scenario(args.scenario)
        if args.save:
            destination = save_report(args.save, smoke_pipeline.output_records(outputs))
            logger.info("Records saved to %s", destination)
        logger.info("Scenario %s completed", args.scenario)
    except Exception:
        logger.exception("Scenario %s failed", args.scenario)
        raise


if __name__ == "__main__":
    main()
