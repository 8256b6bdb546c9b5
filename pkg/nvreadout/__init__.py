# Dispersive-readout simulator for NV-center spin ensembles in microwave cavities
__version__ = "0.1.0"
