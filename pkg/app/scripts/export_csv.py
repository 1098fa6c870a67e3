import numpy as np
import pandas as pd

from app.engine.state import Branch, WaveShape
from app.engine.steady import mass_identity_residual, pohozhaev_residuals

BRANCH_COLUMNS = ['A', 'lambda', 'dphi_R', 'd2phi_R', 'sigma1', 'sigma2',
                  'pohozhaev_res1', 'pohozhaev_res2', 'mass_res']
SHAPE_COLUMNS = ['phi', 'radius', 'x', 'y']
FLOAT_FORMAT = '%.12g'


def branch_frame(branch: Branch) -> pd.DataFrame:
    rows = []
    for s, s1, s2 in zip(branch['points'], branch['sigma1'], branch['sigma2']):
        res1, res2 = pohozhaev_residuals(s)
        rows.append({
            'A': s['A'],
            'lambda': s['lam'],
            'dphi_R': s['dphi_R'],
            'd2phi_R': s['d2phi_R'],
            'sigma1': s1,
            'sigma2': s2,
            'pohozhaev_res1': res1,
            'pohozhaev_res2': res2,
            'mass_res': mass_identity_residual(s),
        })
    return pd.DataFrame(rows, columns=BRANCH_COLUMNS)


def shape_frame(wave: WaveShape) -> pd.DataFrame:
    phi, radius = wave['phi'], wave['radius']
    return pd.DataFrame({
        'phi': phi,
        'radius': radius,
        'x': radius * np.cos(phi),
        'y': radius * np.sin(phi),
    }, columns=SHAPE_COLUMNS)


def export_branch_csv(branch: Branch, filename: str) -> pd.DataFrame:
    df = branch_frame(branch)
    df.to_csv(filename, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return df


def export_shape_csv(wave: WaveShape, filename: str) -> pd.DataFrame:
    df = shape_frame(wave)
    df.to_csv(filename, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return df
