# Online machine-minimization lab
