from .base_worker import BaseWorker
from .eigen_worker import EigenWorker
from .reduce_worker import ReduceWorker
from .roots_worker import RootsWorker

__all__ = ["BaseWorker", "EigenWorker", "ReduceWorker", "RootsWorker"]
