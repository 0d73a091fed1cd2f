import asyncio
import logging

import config
from core.errors import NeronkitError
from core.task_graph import TaskGraph, TaskStatus
from core.module_manager import CommandManager


class Executor:
    def __init__(self, command_manager: CommandManager):
        self.command_manager = command_manager
        self.logger = logging.getLogger("Executor")

    async def execute_graph(self, graph: TaskGraph, context: dict = None) -> TaskGraph:
        """
        Runs ready tasks in job order until nothing is left to run. A failing
        command is recorded on its task; its dependants are skipped and the
        remaining commands still run.
        """
        if not context:
            context = {}

        while not graph.is_complete():
            ready_tasks = graph.get_ready_tasks()
            if not ready_tasks:
                self.logger.error("Plan stalled: pending tasks with unsatisfiable dependencies")
                for task in graph.tasks.values():
                    if task.status == TaskStatus.PENDING:
                        graph.mark_failed(task.id, {"type": "Stalled", "message": "dependencies never completed"},
                                          config.EXIT_INPUT_ERROR)
                break

            # Commands run one after another; parallelism lives inside the commands
            for task in ready_tasks:
                task.status = TaskStatus.RUNNING
                self.logger.info(f"Executing task {task.id}: {task.command}")
                try:
                    result = await asyncio.to_thread(
                        self.command_manager.execute, task.command, tool_context=context, **task.args)
                    graph.mark_completed(task.id, result)
                    self.logger.info(f"Task {task.id} finished: passed={task.passed}")
                except NeronkitError as e:
                    graph.mark_failed(task.id, {"type": type(e).__name__, "message": str(e)}, e.exit_code)
                    self.logger.warning(f"Task {task.id} ({task.command}) failed: {type(e).__name__}: {e}")
                except (TypeError, KeyError, ValueError) as e:
                    # malformed command parameters
                    graph.mark_failed(task.id, {"type": type(e).__name__, "message": str(e)},
                                      config.EXIT_INPUT_ERROR)
                    self.logger.warning(f"Task {task.id} ({task.command}) rejected: {e}")
        return graph
