# Domain package: linalg -> strings -> modrep -> ksdecomp, classify
