from nvreadout.commands import compare, heatmap, populations, spectrum, validate

COMMANDS = [
    populations.command,
    spectrum.command,
    heatmap.command,
    compare.command,
    validate.command,
]
