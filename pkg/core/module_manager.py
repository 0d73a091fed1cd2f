import os
import json
import importlib.util
import inspect
import logging
import sys

import config
from core.errors import JobError


class CommandManager:
    """Discovers commands/<name>/module.json + tools.py and dispatches job commands to them."""

    def __init__(self, commands_dir=None):
        self.commands_dir = commands_dir or config.COMMANDS_DIR
        self.modules = {}  # loaded module.json metadata
        self.tools = {}    # command name -> function
        self.tool_metadata = {}
        self.logger = logging.getLogger("CommandManager")

    def load_commands(self):
        """Scans the commands directory and loads every plugin in it."""
        if not os.path.isdir(self.commands_dir):
            self.logger.warning(f"No commands directory at {self.commands_dir}")
            return
        for item in sorted(os.listdir(self.commands_dir)):
            path = os.path.join(self.commands_dir, item)
            if os.path.isdir(path):
                self._load_single_module(path, item)

    def _load_single_module(self, path, module_name):
        json_path = os.path.join(path, "module.json")
        tools_path = os.path.join(path, "tools.py")
        if not os.path.exists(json_path) or not os.path.exists(tools_path):
            return

        with open(json_path, "r", encoding="utf-8") as f:
            meta = json.load(f)

        import_name = f"commands.{module_name.replace('-', '_')}"
        spec = importlib.util.spec_from_file_location(import_name, tools_path)
        module = importlib.util.module_from_spec(spec)
        sys.modules[import_name] = module
        spec.loader.exec_module(module)

        for tool_name in meta.get("tools", []):
            if hasattr(module, tool_name):
                self.register_tool(tool_name, getattr(module, tool_name), meta.get("description", ""))
            else:
                self.logger.warning(f"Tool '{tool_name}' defined in {json_path} but not found in {tools_path}")
        self.modules[module_name] = meta
        self.logger.debug(f"Loaded command module: {module_name}")

    def register_tool(self, name, func, module_description):
        """Registers a tool function under its command name (underscores become dashes)."""
        command = name.replace("_", "-")
        self.tools[command] = func
        desc = func.__doc__.strip() if func.__doc__ else module_description
        self.tool_metadata[command] = {
            "name": command,
            "func": func,
            "description": desc,
            "params": [p for p in inspect.signature(func).parameters if p not in ("job", "context")],
        }

    def get_tool(self, name):
        return self.tools.get(name)

    def get_definitions(self):
        """Command names with their descriptions and accepted parameters, for --help style listings."""
        return [{"command": name, "description": meta["description"], "params": meta["params"]}
                for name, meta in sorted(self.tool_metadata.items())]

    def execute(self, tool_name, tool_context=None, **kwargs):
        """Runs a command; the loaded job and the context dict are injected when the signature asks."""
        if tool_name not in self.tools:
            raise JobError(f"Unknown command '{tool_name}'")
        func = self.tools[tool_name]
        sig = inspect.signature(func)
        if tool_context:
            if "job" in sig.parameters and "job" in tool_context:
                kwargs["job"] = tool_context["job"]
            if "context" in sig.parameters:
                kwargs["context"] = tool_context
        unknown = [k for k in kwargs if k not in sig.parameters]
        if unknown:
            raise JobError(f"command {tool_name} does not take {', '.join(sorted(unknown))}")
        return func(**kwargs)
