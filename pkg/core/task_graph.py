from typing import List, Dict, Any, Optional
import enum

from core.job import CommandSpec


class TaskStatus(enum.Enum):
    PENDING = "pending"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"
    SKIPPED = "skipped"


class Task:
    def __init__(self, command: str, args: Dict[str, Any], dependencies: List[str] = None, task_id: str = None):
        self.id = task_id or command
        self.command = command
        self.args = args
        self.dependencies = dependencies or []
        self.status = TaskStatus.PENDING
        self.result = None
        self.error = None
        self.exit_code = None

    @classmethod
    def from_spec(cls, spec: CommandSpec) -> "Task":
        return cls(spec.command, spec.params, spec.depends_on, spec.id)

    @property
    def passed(self) -> bool:
        return self.status == TaskStatus.COMPLETED and bool((self.result or {}).get("passed", True))

    def to_dict(self):
        out = {
            "id": self.id,
            "command": self.command,
            "inputs": self.args,
            "dependencies": self.dependencies,
            "status": self.status.value,
        }
        if self.error is not None:
            out["error"] = self.error
        else:
            out["result"] = self.result
        return out


class TaskGraph:
    def __init__(self, tasks: List[Task] = None):
        self.tasks = {t.id: t for t in (tasks or [])}

    @classmethod
    def from_job(cls, job) -> "TaskGraph":
        return cls([Task.from_spec(spec) for spec in job.commands])

    def add_task(self, task: Task):
        self.tasks[task.id] = task

    def get_task(self, task_id: str) -> Optional[Task]:
        return self.tasks.get(task_id)

    def get_ready_tasks(self) -> List[Task]:
        """PENDING tasks whose dependencies all COMPLETED, in job order."""
        ready = []
        for task in self.tasks.values():
            if task.status != TaskStatus.PENDING:
                continue
            if all(self.tasks[d].status == TaskStatus.COMPLETED for d in task.dependencies):
                ready.append(task)
        return ready

    def mark_completed(self, task_id: str, result: Any):
        if task_id in self.tasks:
            self.tasks[task_id].status = TaskStatus.COMPLETED
            self.tasks[task_id].result = result

    def mark_failed(self, task_id: str, error: Dict, exit_code: int):
        if task_id in self.tasks:
            self.tasks[task_id].status = TaskStatus.FAILED
            self.tasks[task_id].error = error
            self.tasks[task_id].exit_code = exit_code
        self._skip_dependants(task_id)

    def _skip_dependants(self, task_id: str):
        for task in self.tasks.values():
            if task.status == TaskStatus.PENDING and task_id in task.dependencies:
                task.status = TaskStatus.SKIPPED
                task.error = {"type": "Skipped", "message": f"dependency {task_id} did not complete"}
                self._skip_dependants(task.id)

    def is_complete(self):
        return all(t.status != TaskStatus.PENDING and t.status != TaskStatus.RUNNING
                   for t in self.tasks.values())
