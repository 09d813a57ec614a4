"""Multicast scheduling with D2D relaying for directional mmWave small cells."""
from .antenna import AntennaParams, Beam, Codebook, build_codebook, gain_db
from .baselines import SCHEMES, run_scheme
from .channel import LOS, NLOS, ChannelModel, beam_rates, best_beam, link_rate
from .config import ExperimentConfig, load_config
from .errors import InfeasibleSchedule, InvalidArgument, InvalidGeometry
from .kernels import BACKEND
from .metrics import MetricsReport, evaluate
from .oracle import exhaustive_optimum
from .partition import PartitionResult, Subset, partition_and_plan
from .schedule import Phase, Schedule, build_schedule, check_feasibility
from .topology import AP, Topology, generate_topology

__version__ = "0.1.0"
