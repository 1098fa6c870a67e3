# __init__.py: Makes /app a package for the radial Liouville motility solver.
