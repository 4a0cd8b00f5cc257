"""
Classe base dos agentes: registro das execuções geométricas
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, List, Optional
import uuid

from ..utils.logger import get_logger, log_bound


@dataclass
class BoundCheck:
    """Valor medido contra o limite aceito (passa se value ≤ bound)."""
    name: str
    value: float
    bound: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.bound)

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'value': self.value, 'bound': self.bound, 'passed': self.passed}


@dataclass
class RunRecord:
    """Uma execução da CLI: comando, exemplo, limites verificados e código de saída."""
    command: str
    run_id: str = field(default_factory=lambda: str(uuid.uuid4()))
    started_at: datetime = field(default_factory=datetime.now)
    fixture: Optional[str] = None
    bounds: List[BoundCheck] = field(default_factory=list)
    decisions: List[Dict[str, Any]] = field(default_factory=list)
    exit_code: Optional[int] = None
    reason: str = ""

    @property
    def failed_bounds(self) -> List[str]:
        return [check.name for check in self.bounds if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'run_id': self.run_id,
            'command': self.command,
            'started_at': self.started_at.isoformat(),
            'fixture': self.fixture,
            'bounds': [check.to_dict() for check in self.bounds],
            'failed_bounds': self.failed_bounds,
            'exit_code': self.exit_code,
            'reason': self.reason,
        }


class BaseAgent(ABC):
    """
    Agente que mantém o histórico das execuções e a trilha de decisões da
    execução corrente.
    """

    def __init__(self, agent_name: str):
        self.agent_name = agent_name
        self.runs: List[RunRecord] = []
        self.logger = get_logger(f"agent.{agent_name}")

    @property
    def current_run(self) -> Optional[RunRecord]:
        return self.runs[-1] if self.runs else None

    def begin_run(self, command: str, metadata: Optional[Dict[str, Any]] = None) -> RunRecord:
        record = RunRecord(command)
        self.runs.append(record)
        self.log_decision("execution_start", command, "comando da CLI", metadata)
        return record

    def log_decision(
        self,
        decision_type: str,
        decision: str,
        reasoning: str,
        metadata: Optional[Dict[str, Any]] = None
    ) -> None:
        """
        Acrescenta uma decisão à execução corrente; ``fixture`` também fica
        registrado no próprio RunRecord.

        Args:
            decision_type: Categoria (``input``, ``fixture``, ``suite``, ``exit_code``, ...)
            decision: O que foi decidido
            reasoning: Motivo registrado
            metadata: Dados adicionais serializáveis
        """
        record = self.current_run
        if record is None:
            raise RuntimeError("Nenhuma execução em andamento")
        if decision_type in ("fixture", "suite"):
            record.fixture = decision
        record.decisions.append({
            'timestamp': datetime.now().isoformat(),
            'run_id': record.run_id,
            'decision_type': decision_type,
            'decision': decision,
            'reasoning': reasoning,
            'metadata': metadata or {},
        })
        self.logger.debug("Decisão", decision_type=decision_type, decision=decision)

    def check_bound(self, name: str, value: float, bound: float) -> bool:
        """Registra ``value ≤ bound`` na execução corrente."""
        check = BoundCheck(name, float(value), float(bound))
        self.current_run.bounds.append(check)
        log_bound(self.logger, name, check.value, check.bound)
        return check.passed

    def end_run(self, exit_code: int, reason: str) -> RunRecord:
        record = self.current_run
        record.exit_code = exit_code
        record.reason = reason
        self.log_decision("exit_code", str(exit_code), reason, {'failed_bounds': record.failed_bounds})
        return record

    def get_audit_trail(self) -> List[Dict[str, Any]]:
        """Decisões da execução corrente, em ordem."""
        return list(self.current_run.decisions) if self.current_run else []

    def get_run_history(self) -> List[Dict[str, Any]]:
        return [record.to_dict() for record in self.runs]

    @abstractmethod
    def health_check(self) -> Dict[str, Any]:
        """Estado do agente e das ferramentas que ele usa."""
