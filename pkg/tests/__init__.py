# Tests for the kthodge package
