"""Backbone: replicated notification DB, TOM, alpha-count and command dispatch."""

from relsim.backbone.alpha import AlphaCount, AlphaParams, AlphaTrack, alpha_run, alpha_update
from relsim.backbone.component import Backbone, BBParams, anti_entropy_exchange, elect_executor
from relsim.backbone.db import DbDelta, Effect, ErrorNotification, Handled, NotificationDB, Seq
from relsim.backbone.tom import Timeout, TimeoutManager, UnknownTimeout

__all__ = [
    "AlphaCount", "AlphaParams", "AlphaTrack", "Backbone", "BBParams", "DbDelta", "Effect",
    "ErrorNotification", "Handled", "NotificationDB", "Seq", "Timeout", "TimeoutManager",
    "UnknownTimeout", "alpha_run", "alpha_update", "anti_entropy_exchange", "elect_executor",
]
