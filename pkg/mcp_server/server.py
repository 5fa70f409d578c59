"""
Command Server (worker dispatch)
Command-based protocol: every job is a numbered command with a status
"""
import logging
from datetime import datetime
from typing import Any, Dict, List

logger = logging.getLogger(__name__)


class CommandServer:
    """Dispatches numerical jobs to registered workers and tools"""

    def __init__(self):
        self.workers = {}
        self.tools = {}
        self.command_history: List[Dict[str, Any]] = []

    def register_worker(self, worker_name: str, worker):
        """Register worker"""
        self.workers[worker_name] = worker
        logger.debug("📝 Worker '%s' registered", worker_name)

    def register_tool(self, tool_name: str, tool):
        """Register tool module or object"""
        self.tools[tool_name] = tool
        logger.debug("🔧 Tool '%s' registered", tool_name)

    def send_command(self, from_name: str, to_name: str, command: str, params: Dict[str, Any]) -> Dict[str, Any]:
        """Record a pending command"""
        cmd = {
            "id": len(self.command_history) + 1,
            "from": from_name,
            "to": to_name,
            "command": command,
            "params": sorted(params),
            "timestamp": datetime.now().isoformat(),
            "status": "pending",
            "result": None,
        }
        self.command_history.append(cmd)
        logger.info("📋 Command #%d: %s → %s (%s)", cmd["id"], from_name, to_name, command)
        return cmd

    def complete_command(self, command_id: int, status: str, result: Any = None):
        """Complete command processing"""
        for cmd in self.command_history:
            if cmd["id"] == command_id:
                cmd["status"] = status
                cmd["result"] = result
                cmd["completed_at"] = datetime.now().isoformat()
                logger.info("   ✅ Command #%d %s", command_id, status)
                break

    @staticmethod
    def _failure(e: Exception) -> Dict[str, Any]:
        return {"success": False, "error": str(e), "error_type": type(e).__name__, "exception": e}

    def dispatch(self, worker_name: str, command: str, **params) -> Dict[str, Any]:
        """
        Run a worker job as a tracked command

        Returns:
            the worker's result dict, or {'success': False, 'error': ...}
            when the worker is missing or raised
        """
        cmd = self.send_command("cli", worker_name, command, params)
        worker = self.workers.get(worker_name)
        if worker is None:
            self.complete_command(cmd["id"], "failed", "unknown worker")
            return {"success": False, "error": f"Worker '{worker_name}' not found", "error_type": "LookupError"}
        try:
            result = worker.run(**params)
        except Exception as e:
            logger.debug("❌ %s failed: %s", command, e)
            self.complete_command(cmd["id"], "failed", f"{type(e).__name__}: {e}")
            return self._failure(e)
        status = "completed" if result.get("converged", True) and result.get("verified", True) else "flagged"
        self.complete_command(cmd["id"], status, command)
        return result

    def call_tool(self, tool_name: str, method: str, **kwargs) -> Dict[str, Any]:
        """
        Call a tool function

        Returns:
            {'success': True, 'value': ...} or {'success': False, 'error': ...}
        """
        tool = self.tools.get(tool_name)
        if tool is None:
            return {"success": False, "error": f"Tool '{tool_name}' not found", "error_type": "LookupError"}
        func = getattr(tool, method, None)
        if func is None:
            return {"success": False, "error": f"Method '{method}' not found in tool '{tool_name}'",
                    "error_type": "AttributeError"}
        try:
            return {"success": True, "value": func(**kwargs)}
        except Exception as e:
            return self._failure(e)

    def get_status(self) -> Dict[str, Any]:
        return {
            "workers": sorted(self.workers),
            "tools": sorted(self.tools),
            "commands": len(self.command_history),
            "failed": sum(1 for c in self.command_history if c["status"] == "failed"),
        }
