"""
Batch Concurrency Module

Runs one command over several problem files with a thread pool. Each job
is sequential on its own; jobs share nothing but the pipeline
configuration.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, List, Optional, Sequence

from errors import ProblemSyntaxError
from models import BatchItem, BatchResults
from pipeline import AnalysisPipeline
from problem import load_problem
from reporter import ProgressReporter

logger = logging.getLogger(__name__)


class BatchRunner:
    """Thread pool over independent problem files"""

    def __init__(self, pipeline: AnalysisPipeline, max_workers: int = 4):
        """
        Initialize the batch runner.

        Args:
            pipeline: Pipeline used for every job
            max_workers: Maximum number of concurrent jobs
        """
        if max_workers < 1:
            raise ValueError("max_workers must be at least 1")
        self.pipeline = pipeline
        self.max_workers = max_workers

    def run_one(self, path: str, command: str) -> BatchItem:
        """Parse and analyse one file; parse and file errors become failed items."""
        try:
            spec = load_problem(path)
        except (ProblemSyntaxError, FileNotFoundError, UnicodeDecodeError) as e:
            logger.error(f"{path}: {e}")
            return BatchItem(path=path, error=str(e))
        return BatchItem(path=path, report=self.pipeline.run(command, spec))

    def run(self, paths: Sequence[str], command: str, show_progress: bool = True,
            on_item: Optional[Callable[[BatchItem], None]] = None) -> BatchResults:
        """
        Run the command on every file.

        Args:
            paths: Problem files
            command: Command name
            show_progress: Show a tqdm progress bar
            on_item: Optional callback for each finished item

        Returns:
            BatchResults with items in input order
        """
        start = time.time()
        if not paths:
            return BatchResults(items=[], total_duration=0.0)

        logger.info(f"Running '{command}' on {len(paths)} problems with {self.max_workers} workers")
        progress = ProgressReporter(len(paths), command, enabled=show_progress)
        items: List[Optional[BatchItem]] = [None] * len(paths)

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_index = {executor.submit(self.run_one, path, command): i for i, path in enumerate(paths)}
            completed = 0
            for future in as_completed(future_to_index):
                index = future_to_index[future]
                completed += 1
                try:
                    item = future.result()
                except Exception as e:
                    logger.error(f"[{completed}/{len(paths)}] Unexpected error on {paths[index]}: {e}",
                                 exc_info=True)
                    item = BatchItem(path=paths[index], error=str(e))
                items[index] = item
                progress.track(item)
                logger.info(f"[{completed}/{len(paths)}] {paths[index]}: exit code {item.exit_code}")
                if on_item is not None:
                    on_item(item)

        progress.close()
        results = BatchResults(items=[item for item in items if item is not None],
                               total_duration=time.time() - start)
        logger.info(f"Batch finished: {results.success_count}/{len(results.items)} succeeded")
        return results
