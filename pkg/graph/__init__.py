"""LangGraph orchestration components."""

from .orchestrator import ClusteringPipeline, PipelineConfig, PipelineState, run_pipeline

__all__ = ["ClusteringPipeline", "PipelineConfig", "PipelineState", "run_pipeline"]
