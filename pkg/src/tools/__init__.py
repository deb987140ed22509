"""MCP Tools organized by domain."""

from .experiment_tools import register_experiment_tools


def register_all_tools(mcp, services):
    """Register all tools with the MCP server."""
    register_experiment_tools(mcp, services)
