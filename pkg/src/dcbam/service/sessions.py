"""In-memory project sessions with optimistic concurrency by revision."""
from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass

from ..errors import IntegrityError, StaleRevisionError
from ..project import Project


@dataclass
class SessionWorkspace:
    session_id: str
    project: Project
    revision: int = 0


class SessionStore:
    """Thread-safe store; mutations are serialized per store and bump the
    revision by exactly one."""

    def __init__(self):
        self._sessions: dict[str, SessionWorkspace] = {}
        self._lock = threading.Lock()

    def create(self, project: Project) -> SessionWorkspace:
        session = SessionWorkspace(session_id=uuid.uuid4().hex, project=project)
        with self._lock:
            self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> SessionWorkspace:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise IntegrityError(f"unknown session id {session_id!r}")
        return session

    def update(self, session_id: str, revision: int, project: Project) -> SessionWorkspace:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise IntegrityError(f"unknown session id {session_id!r}")
            if revision != session.revision:
                raise StaleRevisionError(expected=session.revision, got=revision)
            session.project = project
            session.revision += 1
            return session
