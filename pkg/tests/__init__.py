# Tests package for MFDH Retrieval
