"""Star-topology five-qubit device simulator and experiment suite."""
__version__ = "0.1.0"
