"""LangGraph orchestrator for the consensus clustering pipeline with a support gate."""

import logging
import time
from pathlib import Path
from typing import Dict, List, Literal, Optional, TypedDict

from langgraph.graph import END, StateGraph
from pydantic import BaseModel, Field, model_validator

from balance import BalancedMatrix, SupportDiagnosis, check_support, sinkhorn_knopp
from cli.loaders import Orientation, load_data
from cli.reports import RunReport, describe_partition, write_membership, write_trace
from consensus import ConsensusMatrix, consensus_sum, isolated_elements, knn_consensus, load_consensus, save_consensus
from core.matrix import Spectrum, sym_eigen
from datasets import baseball
from ensemble import ClusteringResult, DataMatrix, EnsembleSpec, clustering_errors, member_error_range, run_ensemble
from sca import RestartSummary, SCAConfig, run_restarts
from uncouple import PerronCluster, perron_cluster
from utils.errors import StageError, SupportError
from utils.matrix_io import write_matrix

logger = logging.getLogger(__name__)

BUILTIN_DATASETS = {"baseball": baseball.data_matrix}


class PipelineConfig(BaseModel):
    """Everything one end-to-end run needs."""

    input: Optional[str] = None
    orientation: Orientation = "rows-elements"
    label_column: Optional[str] = None
    header: bool = True

    consensus: Literal["ensemble", "knn", "file"] = "ensemble"
    ensemble: Optional[EnsembleSpec] = None
    kappa: Optional[int] = Field(default=None, ge=1)
    metric: Literal["euclidean", "cosine"] = "euclidean"
    knn_mode: Literal["intersection", "union"] = "intersection"
    consensus_path: Optional[str] = None

    sinkhorn_tol: float = Field(default=1e-10, gt=0)
    sinkhorn_max_iter: int = Field(default=10_000, ge=1)
    sca: SCAConfig = Field(default_factory=SCAConfig)
    restarts: int = Field(default=1, ge=1)
    workers: int = Field(default=1, ge=1)
    out_dir: Optional[str] = None

    @model_validator(mode="after")
    def _consensus_inputs(self) -> "PipelineConfig":
        if self.consensus == "ensemble" and self.ensemble is None:
            raise ValueError("Ensemble consensus needs an ensemble spec")
        if self.consensus == "knn" and self.kappa is None:
            raise ValueError("kappa-NN consensus needs kappa")
        if self.consensus == "file" and self.consensus_path is None:
            raise ValueError("File consensus needs consensus_path")
        if self.consensus != "file" and self.input is None:
            raise ValueError(f"{self.consensus} consensus needs an input dataset")
        return self


class PipelineState(TypedDict):
    """Shared state across pipeline stages."""

    data: Optional[DataMatrix]
    truth: Optional[ClusteringResult]
    ensemble: List[ClusteringResult]
    consensus: Optional[ConsensusMatrix]
    support: Optional[SupportDiagnosis]
    balanced: Optional[BalancedMatrix]
    spectrum: Optional[Spectrum]
    perron: Optional[PerronCluster]
    restarts: Optional[RestartSummary]
    report: RunReport
    artifacts: Dict[str, str]
    error: Optional[str]
    failed_stage: Optional[str]
    failure: Optional[BaseException]
    validation_passed: bool


class ClusteringPipeline:
    """ensemble -> consensus -> balance -> spectrum -> SCA, as a LangGraph workflow."""

    def __init__(self, config: PipelineConfig):
        """
        Initialize the pipeline.

        Args:
            config: Validated run configuration
        """
        self.config = config
        self.graph = self._build_graph()

    def _build_graph(self):
        """
        Build the StateGraph; every stage routes to END on failure.

        Returns:
            Compiled StateGraph workflow
        """
        workflow = StateGraph(PipelineState)

        workflow.add_node("load_data", self._load_data_node)
        workflow.add_node("build_ensemble", self._build_ensemble_node)
        workflow.add_node("build_consensus", self._build_consensus_node)
        workflow.add_node("check_support", self._check_support_node)
        workflow.add_node("balance", self._balance_node)
        workflow.add_node("spectrum", self._spectrum_node)
        workflow.add_node("cluster", self._cluster_node)

        workflow.set_entry_point("load_data")

        # kappa-NN and file consensus need no ensemble
        workflow.add_conditional_edges(
            "load_data",
            self._after_load,
            {"build_ensemble": "build_ensemble", "build_consensus": "build_consensus", END: END},
        )
        self._chain(workflow, "build_ensemble", "build_consensus")
        self._chain(workflow, "build_consensus", "check_support")
        workflow.add_conditional_edges(
            "check_support",
            self._should_balance,
            {True: "balance", False: END},
        )
        self._chain(workflow, "balance", "spectrum")
        self._chain(workflow, "spectrum", "cluster")
        workflow.add_edge("cluster", END)

        return workflow.compile()

    def _chain(self, workflow: StateGraph, source: str, target: str) -> None:
        workflow.add_conditional_edges(
            source,
            lambda state: state.get("failure") is None,
            {True: target, False: END},
        )

    def _after_load(self, state: PipelineState) -> str:
        if state.get("failure") is not None:
            return END
        return "build_ensemble" if self.config.consensus == "ensemble" else "build_consensus"

    def _should_balance(self, state: PipelineState) -> bool:
        return state.get("validation_passed", False)

    def _fail(self, state: PipelineState, stage: str, e: Exception) -> PipelineState:
        logger.error(f"❌ Stage {stage} failed: {e}")
        state["error"] = f"{stage} error: {e}"
        state["failed_stage"] = stage
        state["failure"] = e
        state["validation_passed"] = False
        return state

    def _timed(self, state: PipelineState, stage: str, started: float) -> None:
        timings = dict(state["report"].timings)
        timings[stage] = time.perf_counter() - started
        state["report"].timings = timings

    def _save(self, state: PipelineState, name: str, writer) -> None:
        if self.config.out_dir is None:
            return
        path = Path(self.config.out_dir) / name
        path.parent.mkdir(parents=True, exist_ok=True)
        writer(path)
        artifacts = dict(state["artifacts"])
        artifacts[name] = str(path)
        state["artifacts"] = artifacts

    def _load_data_node(self, state: PipelineState) -> PipelineState:
        started = time.perf_counter()
        cfg = self.config
        try:
            if cfg.input is None:
                logger.info("🔍 Step 1: No dataset given; consensus comes from file")
            elif cfg.input in BUILTIN_DATASETS:
                logger.info(f"🔍 Step 1: Loading built-in dataset {cfg.input}")
                state["data"] = BUILTIN_DATASETS[cfg.input]()
            else:
                logger.info(f"🔍 Step 1: Loading {cfg.input}")
                data, truth = load_data(cfg.input, cfg.orientation, cfg.label_column, cfg.header)
                state["data"] = data
                state["truth"] = truth
        except Exception as e:
            return self._fail(state, "load_data", e)
        self._timed(state, "load_data", started)
        return state

    def _build_ensemble_node(self, state: PipelineState) -> PipelineState:
        started = time.perf_counter()
        try:
            logger.info(f"🔍 Step 2: Generating {self.config.ensemble.size} ensemble members")
            state["ensemble"] = run_ensemble(state["data"], self.config.ensemble, workers=self.config.workers)
            if state.get("truth") is not None:
                state["report"].member_errors = member_error_range(state["ensemble"], state["truth"])
        except Exception as e:
            return self._fail(state, "build_ensemble", e)
        self._timed(state, "build_ensemble", started)
        return state

    def _build_consensus_node(self, state: PipelineState) -> PipelineState:
        started = time.perf_counter()
        cfg = self.config
        try:
            logger.info(f"🔍 Step 3: Building {cfg.consensus} consensus matrix")
            if cfg.consensus == "ensemble":
                S = consensus_sum(state["ensemble"])
            elif cfg.consensus == "knn":
                S = knn_consensus(state["data"], cfg.kappa, cfg.metric, cfg.knn_mode)
            else:
                S = load_consensus(cfg.consensus_path)
            state["consensus"] = S
            self._save(state, "consensus.txt", lambda path: save_consensus(path, S))
        except Exception as e:
            return self._fail(state, "build_consensus", e)
        self._timed(state, "build_consensus", started)
        return state

    def _check_support_node(self, state: PipelineState) -> PipelineState:
        try:
            logger.info("🔍 Step 4: Checking the zero pattern of the consensus matrix...")
            S = state["consensus"]
            isolated_elements(S)
            diagnosis = check_support(S)
            state["support"] = diagnosis
            state["validation_passed"] = diagnosis.fully_indecomposable

            if diagnosis.fully_indecomposable:
                logger.info("✅ Support check PASSED. Proceeding to balancing.")
            else:
                logger.warning(f"⚠️ Support check FAILED ({diagnosis.describe()}) - skipping balancing.")
                self._fail(
                    state, "check_support",
                    SupportError(f"Consensus matrix cannot be balanced: {diagnosis.describe()}", diagnosis=diagnosis),
                )
        except Exception as e:
            return self._fail(state, "check_support", e)
        return state

    def _balance_node(self, state: PipelineState) -> PipelineState:
        started = time.perf_counter()
        try:
            logger.info("🔍 Step 5: Balancing to doubly stochastic form")
            B = sinkhorn_knopp(state["consensus"], tol=self.config.sinkhorn_tol, max_iter=self.config.sinkhorn_max_iter)
            state["balanced"] = B
            self._save(state, "balanced.txt", lambda path: write_matrix(path, B.P, {"iterations": B.iterations}))
            self._save(state, "scaling.txt", lambda path: write_matrix(path, B.d))
        except Exception as e:
            return self._fail(state, "balance", e)
        self._timed(state, "balance", started)
        return state

    def _spectrum_node(self, state: PipelineState) -> PipelineState:
        started = time.perf_counter()
        try:
            logger.info("🔍 Step 6: Computing the spectrum of P")
            spectrum = sym_eigen(state["balanced"].P, tol=self.config.sca.eigen_tol, vectors=False)
            perron = perron_cluster(spectrum)
            state["spectrum"] = spectrum
            state["perron"] = perron
            report = state["report"]
            report.detected_k = perron.k
            report.perron_gap = perron.gap
            report.eigenvalues = [float(v) for v in spectrum.eigenvalues]
            self._save(state, "eigenvalues.txt", lambda path: write_matrix(path, spectrum.eigenvalues))
        except Exception as e:
            return self._fail(state, "spectrum", e)
        self._timed(state, "spectrum", started)
        return state

    def _cluster_node(self, state: PipelineState) -> PipelineState:
        started = time.perf_counter()
        cfg = self.config
        try:
            logger.info(f"🔍 Step 7: Running {cfg.restarts} stochastic clustering restart(s)")
            sca_cfg = cfg.sca
            if sca_cfg.k_override is None and state["perron"].k >= 2:
                sca_cfg = sca_cfg.model_copy(update={"k_override": state["perron"].k})
            summary = run_restarts(state["balanced"], sca_cfg, restarts=cfg.restarts, workers=cfg.workers)
            state["restarts"] = summary

            top = summary.histogram[0]
            chosen = summary.results[top.first_restart]
            report = state["report"]
            report.k_used = chosen.k_used
            report.stop_reason = chosen.stop_reason
            report.iterations = chosen.iterations_run
            names = state["data"].element_names if state.get("data") is not None else None
            report.histogram = [
                {"count": entry.count, "partition": describe_partition(entry.clustering, names)}
                for entry in summary.histogram
            ]
            if state.get("truth") is not None:
                report.errors = clustering_errors(top.clustering, state["truth"])

            self._save(state, "clusters.csv", lambda path: write_membership(path, top.clustering, names))
            self._save(state, "trace.csv", lambda path: write_trace(path, chosen.trace))
            logger.info(f"✅ Final clustering: {describe_partition(top.clustering, names)}")
        except Exception as e:
            return self._fail(state, "cluster", e)
        self._timed(state, "cluster", started)
        return state

    def run(self) -> PipelineState:
        """
        Execute the pipeline.

        Returns:
            Final state holding every intermediate product and the report

        Raises:
            StageError: If a stage failed; artifacts written before the failure are kept
        """
        logger.info(f"🚀 Starting clustering pipeline ({self.config.consensus} consensus)")
        logger.info("=" * 60)

        initial_state: PipelineState = {
            "data": None,
            "truth": None,
            "ensemble": [],
            "consensus": None,
            "support": None,
            "balanced": None,
            "spectrum": None,
            "perron": None,
            "restarts": None,
            "report": RunReport(),
            "artifacts": {},
            "error": None,
            "failed_stage": None,
            "failure": None,
            "validation_passed": False,
        }

        final_state = self.graph.invoke(initial_state)

        if self.config.out_dir is not None:
            final_state["report"].write(self.config.out_dir)
        logger.info("=" * 60)

        if final_state.get("failure") is not None:
            raise StageError(final_state["failed_stage"], final_state["failure"])
        logger.info("✅ Pipeline completed")
        return final_state


def run_pipeline(config: PipelineConfig) -> RunReport:
    return ClusteringPipeline(config).run()["report"]
