# Tests package for the ring sequence toolkit
