import matplotlib

matplotlib.use('Agg')

import matplotlib.pyplot as plt
import numpy as np

from app.engine.state import Branch, WaveShape

# fixed salt so SVG element ids, and with them the files, are reproducible
plt.rcParams['svg.hashsalt'] = 'liouville-motility'
SVG_METADATA = {'Date': None}


def _save_svg(fig, output_path: str) -> None:
    fig.savefig(output_path, format='svg', metadata=SVG_METADATA)


def generate_shape_graph(wave: WaveShape, output_path: str = None):
    """
    Plots the traveling-wave boundary as a closed polyline over the reference circle r = R.
    Axes span [-1.2 R, 1.2 R] in both directions. Returns the matplotlib figure.
    """
    R = wave['R']
    phi = np.append(wave['phi'], wave['phi'][0])
    radius = np.append(wave['radius'], wave['radius'][0])
    circle = np.linspace(0.0, 2.0 * np.pi, 361)

    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(R * np.cos(circle), R * np.sin(circle), linestyle='--', color='grey',
            linewidth=0.8, label=f'r = {R:g}')
    ax.plot(radius * np.cos(phi), radius * np.sin(phi), color='black', linewidth=1.5,
            label=f'V = {wave["V"]:g}')
    lim = 1.2 * R
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect('equal')
    ax.set_title(f'Traveling wave shape, R = {R:g}, beta = {wave["beta"]:g}')
    ax.legend(loc='upper right')

    if output_path:
        _save_svg(fig, output_path)
    return fig


def generate_branch_graph(branch: Branch, output_path: str = None):
    """
    Plots Lambda against A = Phi(0) along the branch and marks the fold.
    Returns the matplotlib figure.
    """
    A = [p['A'] for p in branch['points']]
    lam = [p['lam'] for p in branch['points']]
    fold = branch['minimal_index']

    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(A, lam, marker='.', color='blue', label='Lambda(A)')
    ax.plot([A[fold]], [lam[fold]], marker='o', color='red',
            label=f'fold Lambda = {branch["lambda_max"]:.6g}')
    ax.set_xlabel('A = Phi(0)')
    ax.set_ylabel('Lambda')
    ax.set_title(f'Radial steady-state branch, R = {branch["R"]:g}')
    ax.legend()
    ax.grid(True)

    if output_path:
        _save_svg(fig, output_path)
    return fig
