# Eisenstein Module Verifier
