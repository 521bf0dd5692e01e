"""
Run artifact (manifest + outputs) service
"""

from .run_artifact_service import (
    INCOMPLETE_MARKER,
    MANIFEST_NAME,
    METRICS_NAME,
    RunArtifacts,
    RunArtifactService,
    run_artifact_service,
    sha256_file,
)

__all__ = [
    "INCOMPLETE_MARKER",
    "MANIFEST_NAME",
    "METRICS_NAME",
    "RunArtifacts",
    "RunArtifactService",
    "run_artifact_service",
    "sha256_file",
]
