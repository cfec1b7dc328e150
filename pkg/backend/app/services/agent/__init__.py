from .agent import AgentStats, ContextAgent
from .messages import CHECKER, Message, MessageKind

__all__ = ['AgentStats', 'CHECKER', 'ContextAgent', 'Message', 'MessageKind']
