import { ChangeDetectionStrategy, Component, inject } from '@angular/core';
import { toSignal } from '@angular/core/rxjs-interop';
import { FormBuilder, ReactiveFormsModule } from '@angular/forms';

@Component({
  selector: 'app-profile-editor',
  standalone: true,
  imports: [ReactiveFormsModule],
  template: `
    <form [formGroup]="form">
      <input formControlName="first" />
      <input formControlName="last" />
    </form>
    <p>Preview: {{ value()?.first }} {{ value()?.last }}</p>
  `,
  changeDetection: ChangeDetectionStrategy.OnPush,
})
export class ProfileEditorComponent {
  private readonly fb = inject(FormBuilder);
  readonly form = this.fb.group({ first: [''], last: [''] });
  private readonly changes$ = this.form.valueChanges;
  readonly value = toSignal(this.changes$);
}
