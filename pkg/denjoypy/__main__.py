from denjoypy.cli import run

run()
