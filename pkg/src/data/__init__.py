# Fixture and path file I/O
