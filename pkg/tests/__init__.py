# Ensures pytest can import the tests package during discovery.
