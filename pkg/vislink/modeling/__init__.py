from vislink.modeling import checkpoint, costs, integrate, mpnn, networks, readout
